"""Classification of path and distributional properties."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from scipy import integrate

from .errors import ConvergenceError, DomainError
from .exponents import laplace_derivative_at_zero, laplace_spectrally_negative
from .measure import LampertiCharacteristics, effective_drift, structural_constants

TO_PLUS = "to_plus_infinity"
OSCILLATES = "oscillates"
TO_MINUS = "to_minus_infinity"

RHO_BRACKET = (1.0 + 1e-9, 2.0 - 1e-9)


@dataclass(frozen=True)
class ClassificationReport:
    variation: str
    p_threshold: float
    creeps_up: str
    zero_regular_upward: str
    selfdecomposable: bool
    jurek: bool
    tail_class_delta: float | None
    drift: str | None = None
    rho_zero: float | None = None
    cramer_root: float | None = None
    has_increase_times: bool | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def is_selfdecomposable(chars: LampertiCharacteristics) -> bool:
    """r * density is nonincreasing along every direction iff max f <= alpha + 1/2."""
    return chars.gamma <= chars.alpha + 0.5


def is_spectrally_negative(chars: LampertiCharacteristics) -> bool:
    return chars.dim == 1 and chars.c_plus == 0.0 and 1.0 < chars.alpha < 2.0


def classify(chars: LampertiCharacteristics) -> ClassificationReport:
    """Evaluate every classification rule that applies to ``chars``."""
    a = chars.alpha
    variation = "finite" if a < 1.0 else "infinite"
    creeps, regular, delta = "undetermined", "undetermined", None
    drift = rho0 = cramer = increase = None
    if chars.dim == 1:
        if a < 1.0:
            d = effective_drift(chars)
            creeps = "yes" if d > 0 else "undetermined"
            regular = "yes" if d >= 0 else "undetermined"
        else:
            creeps = "no" if a > 1.0 else "undetermined"
            regular = "yes"
        delta = a + 1.0 - chars.beta if chars.c_plus > 0 else None
        if is_spectrally_negative(chars):
            increase = has_increase_times(chars)
            theta_tilde = structural_constants(chars).theta_tilde
            if abs(theta_tilde) < 1e-9:
                drift, rho0 = drift_classification(chars)
                if drift == TO_MINUS:
                    cramer = cramer_root(chars)
    return ClassificationReport(
        variation=variation,
        p_threshold=a,
        creeps_up=creeps,
        zero_regular_upward=regular,
        selfdecomposable=is_selfdecomposable(chars),
        jurek=True,
        tail_class_delta=delta,
        drift=drift,
        rho_zero=rho0,
        cramer_root=cramer,
        has_increase_times=increase,
    )


def drift_function(alpha: float, rho: float, c_minus: float = 1.0) -> float:
    """g(rho): right derivative at 0 of the Laplace exponent (theta~ = 0)."""
    chars = LampertiCharacteristics.one_dim(alpha, rho=rho, c_plus=0.0, c_minus=c_minus)
    return laplace_derivative_at_zero(chars)


def find_rho_zero(alpha: float, c_minus: float = 1.0, tol: float = 1e-12) -> float:
    """Root of g on (1, 2) by bisection, stopping once |g| < tol or the bracket collapses."""
    lo, hi = RHO_BRACKET
    g_lo = drift_function(alpha, lo, c_minus)
    g_hi = drift_function(alpha, hi, c_minus)
    if g_lo * g_hi > 0:
        raise ConvergenceError(f"g does not change sign on {RHO_BRACKET}: {g_lo}, {g_hi}")
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid = drift_function(alpha, mid, c_minus)
        if abs(g_mid) < tol or hi - lo < 1e-15:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return mid


def _require_zero_theta_tilde(chars: LampertiCharacteristics):
    if not is_spectrally_negative(chars):
        raise DomainError("requires a spectrally negative process with alpha in (1, 2)")
    theta_tilde = structural_constants(chars).theta_tilde
    if abs(theta_tilde) > 1e-9:
        raise DomainError(
            f"requires theta~ = 0, got {theta_tilde:.3g}; see zero_theta_tilde()"
        )


def zero_theta_tilde(chars: LampertiCharacteristics) -> LampertiCharacteristics:
    """Same jump structure with theta chosen so that theta~ = 0."""
    current = structural_constants(chars)
    return chars.replace(theta=chars.theta[0] - current.theta_tilde)


def drift_classification(chars: LampertiCharacteristics, rtol: float = 1e-9):
    """Long-run behaviour of a spectrally negative process with theta~ = 0.

    Returns the label and the root rho0 of g; rho within ``rtol`` of rho0 is
    reported as oscillating.
    """
    _require_zero_theta_tilde(chars)
    rho0 = find_rho_zero(chars.alpha, chars.c_minus)
    if abs(chars.rho - rho0) <= rtol:
        return OSCILLATES, rho0
    return (TO_PLUS if chars.rho < rho0 else TO_MINUS), rho0


def cramer_root(chars: LampertiCharacteristics, tol: float = 1e-10) -> float:
    """Positive zero of the Laplace exponent of a process drifting to -infinity."""
    label, _ = drift_classification(chars)
    if label != TO_MINUS:
        raise DomainError(f"Cramer root requires drift to -infinity, process {label}")

    def phi(x):
        return laplace_spectrally_negative(chars, x, theta_tilde=0.0)

    lo = 1e-8
    if phi(lo) >= 0:
        raise ConvergenceError("Laplace exponent not negative near 0")
    hi = 1.0
    while phi(hi) < 0:
        hi *= 2.0
        if hi > 1e8:
            raise ConvergenceError("no sign change found for the Cramer root")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if phi(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def has_increase_times(chars: LampertiCharacteristics) -> bool:
    """Integral test int^inf lam^{-3} Phi(lam) d lam < inf.

    Phi grows like c- Gamma(-alpha) lam^alpha, so the test reduces to alpha - 3 < -1.
    """
    if not is_spectrally_negative(chars):
        raise DomainError("increase-times test requires a spectrally negative process")
    return chars.alpha - 3.0 < -1.0


def increase_times_tail_integral(chars: LampertiCharacteristics, lo: float, hi: float) -> float:
    """Numerical value of int_lo^hi lam^{-3} Phi(lam) d lam (diagnostic for the test above)."""
    theta_tilde = structural_constants(chars).theta_tilde
    val, _ = integrate.quad(
        lambda x: laplace_spectrally_negative(chars, x, theta_tilde) / x**3, lo, hi, limit=200
    )
    return val
