"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class ConvergenceError(RuntimeError):
    """A numerical procedure did not reach its tolerance."""


class UnsupportedDimensionError(DomainError):
    """The operation is only implemented in dimension one."""
