"""Lamperti stable Levy processes: exponents, path properties, simulation,
associated processes and limit theorems."""

from .errors import ConvergenceError, DomainError, UnsupportedDimensionError
from .measure import DEFAULT_QUADRATURE, Direction, LampertiCharacteristics, QuadratureSpec

__all__ = [
    "ConvergenceError",
    "DEFAULT_QUADRATURE",
    "Direction",
    "DomainError",
    "LampertiCharacteristics",
    "QuadratureSpec",
    "UnsupportedDimensionError",
]
