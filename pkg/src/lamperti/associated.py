"""Processes built from Lamperti stable laws.

* the background driving Levy measure of a stationary Ornstein-Uhlenbeck
  process with Lamperti stable marginals,
* the spectrally negative parent process of a Lamperti stable subordinator,
  its Levy density, and the series form of the subordinator tail,
* scale functions of the associated spectrally negative processes and the
  Laplace exponents of the killed variants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from . import specfun
from .errors import ConvergenceError, DomainError
from .exponents import laplace_subordinator
from .measure import (
    DEFAULT_QUADRATURE,
    LampertiCharacteristics,
    QuadratureSpec,
    effective_drift,
    log_expm1_scalar,
    radial_density,
)
from .properties import is_selfdecomposable

MAX_SERIES_TERMS = 100_000
KILLED_SERIES_TOL = 1e-14

BETA1 = "beta1"
KILLED = "killed"
WSTAR = "wstar"
_METHODS = {BETA1: "beta1_integral", KILLED: "killed_series", WSTAR: "wstar_integral"}


# ---------------------------------------------------------------------------
# Ornstein-Uhlenbeck driver


def _ou_bracket(alpha: float, f: float, r: float) -> float:
    """r f + 1 - e^r + r e^r (alpha + 1 - f), with a Taylor form near 0."""
    if r < 1e-3:
        a1 = alpha + 1.0 - f
        return (
            alpha * r
            + (alpha + 0.5 - f) * r**2
            + (a1 / 2.0 - 1.0 / 6.0) * r**3
            + (a1 / 6.0 - 1.0 / 24.0) * r**4
        )
    return r * f - math.expm1(r) + r * math.exp(r) * (alpha + 1.0 - f)


def ou_driver_density(chars: LampertiCharacteristics, x: float, c: float = 1.0) -> float:
    """Levy density at ``x`` of the driver of an OU process with rate ``c``.

    The driver measure is -c d/dr (r times the radial density), which along
    an atom (f, sigma) equals

        c sigma e^{rf} (e^r - 1)^{-(alpha+2)} (r f + 1 - e^r + r e^r (alpha+1-f)),

    with r = |x| and the atom chosen by the sign of x.  It is nonnegative
    exactly when the law is self-decomposable.
    """
    chars._require_1d()
    if not is_selfdecomposable(chars):
        raise DomainError(
            f"driver density requires max f <= alpha + 1/2, got {chars.gamma} > {chars.alpha + 0.5}"
        )
    if not c > 0:
        raise DomainError(f"OU rate must be positive, got {c}")
    if x == 0:
        raise DomainError("driver density is undefined at 0")
    sigma = chars.c_plus if x > 0 else chars.c_minus
    f = chars.beta if x > 0 else chars.rho
    if sigma == 0.0:
        return 0.0
    a, r = chars.alpha, abs(x)
    bracket = _ou_bracket(a, f, r)
    return float(c * sigma * bracket * math.exp(r * f - (a + 2.0) * log_expm1_scalar(r)))


# ---------------------------------------------------------------------------
# parent process of a subordinator


def _require_pure_jump_subordinator(chars: LampertiCharacteristics):
    chars._require_1d()
    if not 0.0 < chars.alpha < 1.0 or chars.c_minus != 0.0 or chars.c_plus == 0.0:
        raise DomainError("requires alpha in (0, 1) and only positive jumps")
    d = effective_drift(chars)
    if abs(d) > 1e-12:
        raise DomainError(f"requires zero drift, got {d}")


def parent_laplace(chars: LampertiCharacteristics, lam: float) -> float:
    """lam * Phi_L(lam): Laplace exponent of the parent spectrally negative process."""
    _require_pure_jump_subordinator(chars)
    if lam < 0:
        raise DomainError("lambda must be nonnegative")
    if lam == 0:
        return 0.0
    return lam * laplace_subordinator(chars, lam)


def parent_levy_components(chars: LampertiCharacteristics) -> list[tuple[float, float, float]]:
    """(alpha, f, weight) of the two Lamperti stable densities summing to the parent density."""
    chars._require_1d()
    a, b, cp = chars.alpha, chars.beta, chars.c_plus
    comps = [(a + 1.0, b + 1.0, cp * (a + 1.0 - b))]
    if b != 0.0:
        comps.append((a + 1.0, b, cp * b))
    return comps


def parent_levy_density(chars: LampertiCharacteristics, x: float) -> float:
    """c+ e^{beta r} (e^r - 1)^{-(alpha+2)} ((alpha+1-beta) e^r + beta) at x = -r < 0."""
    chars._require_1d()
    if not x < 0:
        raise DomainError(f"parent density lives on x < 0, got {x}")
    a, b, cp = chars.alpha, chars.beta, chars.c_plus
    if b < 0:
        raise DomainError(f"parent density requires beta >= 0, got {b}")
    r = -x
    log_base = b * r - (a + 2.0) * log_expm1_scalar(r)
    return float(cp * math.exp(log_base) * ((a + 1.0 - b) * math.exp(r) + b))


def parent_levy_density_from_components(chars: LampertiCharacteristics, x: float) -> float:
    """Same density assembled from :func:`parent_levy_components`."""
    if not x < 0:
        raise DomainError(f"parent density lives on x < 0, got {x}")
    return float(sum(radial_density(a, f, w, -x) for a, f, w in parent_levy_components(chars)))


# ---------------------------------------------------------------------------
# binomial series for the tail


def tail_series(chars: LampertiCharacteristics, x: float, tol: float = 1e-14) -> float:
    """Tail of the positive-jump measure on [x, inf) by binomial expansion.

    Expanding (1 - e^{-y})^{-(alpha+1)} and integrating term by term gives

        c+ e^{-A x} / A * sum_n (alpha+1)_n (A)_n / (n! (A+1)_n) e^{-n x},

    with A = alpha + 1 - beta.  Terms are summed until the geometric bound
    on the remainder drops below ``tol`` relative to the partial sum.
    """
    chars._require_1d()
    if not x > 0:
        raise DomainError(f"tail_series requires x > 0, got {x}")
    a, b, cp = chars.alpha, chars.beta, chars.c_plus
    if cp == 0.0:
        return 0.0
    big_a = a + 1.0 - b
    q = math.exp(-x)
    term = 1.0 / big_a
    total = term
    for n in range(MAX_SERIES_TERMS):
        ratio = (a + 1.0 + n) * (big_a + n) / ((n + 1.0) * (big_a + 1.0 + n)) * q
        term *= ratio
        total += term
        if ratio < 1.0 and term * ratio / (1.0 - ratio) <= tol * total:
            return float(cp * math.exp(-big_a * x) * total)
    raise ConvergenceError(f"tail series did not converge within {MAX_SERIES_TERMS} terms at x={x}")


# ---------------------------------------------------------------------------
# scale functions


@dataclass(frozen=True)
class ScaleFunctionTable:
    x_grid: tuple[float, ...]
    w_values: tuple[float, ...]
    method: str

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.x_grid), np.asarray(self.w_values)


def _check_grid(x_grid: Sequence[float]) -> np.ndarray:
    x = np.asarray(x_grid, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise DomainError("x_grid must be a nonempty one-dimensional sequence")
    if np.any(x < 0) or np.any(np.diff(x) <= 0):
        raise DomainError("x_grid must be nonnegative and strictly increasing")
    return x


def _cumulative(x: np.ndarray, piece: Callable[[float, float], float]) -> np.ndarray:
    out = np.empty_like(x)
    acc, prev = 0.0, 0.0
    for i, xi in enumerate(x):
        acc += piece(prev, xi) if xi > prev else 0.0
        out[i] = acc
        prev = xi
    return out


def beta1_tail_constant(chars: LampertiCharacteristics) -> float:
    """alpha / (c+ Gamma(alpha) Gamma(1-alpha)), the scale of the conjugate tail when beta = 1."""
    a = chars.alpha
    return a / (chars.c_plus * specfun.real_gamma(a) * specfun.real_gamma(1.0 - a))


def _integral_one_minus_emy(alpha: float, shift: float, lo: float, hi: float, spec: QuadratureSpec) -> float:
    """int_lo^hi e^{-shift y} (1 - e^{-y})^{alpha-1} dy.

    With u = 1 - e^{-y} and then v = u^alpha the integrand becomes
    (1 - v^{1/alpha})^{shift-1} / alpha, which is bounded near 0.
    """
    kw = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.limit)

    def in_v(v):
        u = v ** (1.0 / alpha)
        return (1.0 - u) ** (shift - 1.0) / alpha if u < 1.0 else 0.0

    def in_y(y):
        return math.exp(-shift * y + (alpha - 1.0) * math.log1p(-math.exp(-y)))

    split = 1.0
    total = 0.0
    if lo < split:
        b = min(hi, split)
        v_lo = (-math.expm1(-lo)) ** alpha
        v_hi = (-math.expm1(-b)) ** alpha
        total += integrate.quad(in_v, v_lo, v_hi, **kw)[0]
        lo = b
    if hi > lo:
        total += integrate.quad(in_y, lo, hi, **kw)[0]
    return total


def killed_series_sum(alpha: float, beta: float) -> float:
    """sum_n (alpha+1)_n (alpha-beta)_n / (n! (alpha+2-beta)_n) by Gauss's summation formula."""
    g = specfun.real_gamma
    return g(alpha + 2.0 - beta) * g(1.0 - alpha) / g(1.0 - beta)


def _killed_values(chars: LampertiCharacteristics, x: np.ndarray) -> np.ndarray:
    """-K x + c+ sum_n coef_n (1 - e^{-(alpha+2-beta+n) x}).

    The constant part sum_n coef_n is summed in closed form.  The exponential
    part converges geometrically for x > 0; it is truncated once the current
    term, times the bound on the remaining coefficient mass, is below 1e-14.
    """
    a, b, cp = chars.alpha, chars.beta, chars.c_plus
    k_signed = cp * specfun.real_gamma(-a) * specfun.real_gamma(1.0 - b + a) / specfun.real_gamma(1.0 - b)
    total = killed_series_sum(a, b)
    c = a + 2.0 - b
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        if xi == 0.0:
            out[i] = 0.0
            continue
        q = math.exp(-xi)
        coef, acc, partial_coefs = 1.0, 0.0, 0.0
        weight = math.exp(-c * xi)
        for n in range(50 * MAX_SERIES_TERMS):
            acc += coef * weight
            partial_coefs += coef
            if abs(total - partial_coefs) * weight * q <= KILLED_SERIES_TOL and n > 0:
                break
            coef *= (a + 1.0 + n) * (a - b + n) / ((n + 1.0) * (c + n))
            weight *= q
            if weight == 0.0 or coef == 0.0:
                break
        else:
            raise ConvergenceError(f"killed scale-function series did not converge at x={xi}")
        out[i] = -k_signed * xi + cp * (total - acc)
    return out


def scale_function(
    chars: LampertiCharacteristics,
    variant: str,
    x_grid: Sequence[float],
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> ScaleFunctionTable:
    """Tabulate one of the three scale functions on ``x_grid``.

    ``beta1``: W(x) = int_0^x K (1 - e^{-y})^{alpha-1} dy with
    K = alpha / (c+ Gamma(alpha) Gamma(1-alpha)), the scale function of the
    parent process when beta = 1.
    ``killed``: the closed series for the parent of the conjugate subordinator.
    ``wstar``: (c+ Gamma(1-alpha)^2)^{-1} int_0^x e^{-(alpha-beta) y} (e^y - 1)^{alpha-1} dy.
    """
    chars._require_1d()
    if variant not in _METHODS:
        raise DomainError(f"unknown scale-function variant {variant!r}")
    a, b = chars.alpha, chars.beta
    if not 0.0 < a < 1.0 or chars.c_plus == 0.0:
        raise DomainError("scale functions require alpha in (0, 1) and c+ > 0")
    if variant == BETA1 and b != 1.0:
        raise DomainError(f"beta1 variant requires beta = 1, got {b}")
    if variant in (KILLED, WSTAR) and not b < 1.0:
        raise DomainError(f"{variant} variant requires beta < 1, got {b}")
    x = _check_grid(x_grid)

    if variant == BETA1:
        k = beta1_tail_constant(chars)
        w = _cumulative(x, lambda lo, hi: k * _integral_one_minus_emy(a, 0.0, lo, hi, spec))
    elif variant == WSTAR:
        # e^{-(alpha-beta) y} (e^y - 1)^{alpha-1} = e^{-(1-beta) y} (1 - e^{-y})^{alpha-1}
        k = 1.0 / (chars.c_plus * specfun.real_gamma(1.0 - a) ** 2)
        w = _cumulative(x, lambda lo, hi: k * _integral_one_minus_emy(a, 1.0 - b, lo, hi, spec))
    else:
        w = _killed_values(chars, x)
    return ScaleFunctionTable(tuple(float(v) for v in x), tuple(float(v) for v in w), _METHODS[variant])


@dataclass(frozen=True)
class KilledExponents:
    killing_rate: float
    psi_YP: Callable[[float], float]
    psi_YPstar: Callable[[float], float]
    k_signed: float

    def __iter__(self):
        return iter((self.killing_rate, self.psi_YP, self.psi_YPstar))


def killed_exponents(chars: LampertiCharacteristics) -> KilledExponents:
    """Killing rate and Laplace exponents of the two parent processes.

    K = c+ Gamma(-alpha) Gamma(1-beta+alpha) / Gamma(1-beta) is negative, so the
    killing rate reported is -K, the value at 0 of the positive exponent
    -c+ Gamma(-alpha) (lam+1-beta)_alpha.  The signed constant K is kept as
    ``k_signed``.
    """
    chars._require_1d()
    a, b, cp = chars.alpha, chars.beta, chars.c_plus
    if not 0.0 < a < 1.0 or not b < 1.0 or not cp > 0:
        raise DomainError("requires alpha in (0, 1), beta < 1 and c+ > 0")
    g_neg = specfun.real_gamma(-a)
    k_signed = cp * g_neg * specfun.real_gamma(1.0 - b + a) / specfun.real_gamma(1.0 - b)

    def psi_yp(lam: float) -> float:
        if lam < 0:
            raise DomainError("lambda must be nonnegative")
        if lam == 0:
            return 0.0
        log_ratio = specfun.log_gamma(1.0 - b + lam) - specfun.log_gamma(1.0 - b + lam + a)
        return float(lam * lam * math.exp(log_ratio.real))

    def psi_yp_star(lam: float) -> float:
        if lam < 0:
            raise DomainError("lambda must be nonnegative")
        if lam == 0:
            return 0.0
        log_ratio = specfun.log_gamma(lam + 1.0 - b + a) - specfun.log_gamma(lam + 1.0 - b)
        return float(cp * g_neg * lam * math.exp(log_ratio.real))

    return KilledExponents(-k_signed, psi_yp, psi_yp_star, k_signed)
