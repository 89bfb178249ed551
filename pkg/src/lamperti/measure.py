"""Lamperti stable Levy measure: characteristics, densities and radial integrals.

Along a direction xi the measure has radial density

    sigma(xi) * exp(r f(xi)) * (e^r - 1)^{-(alpha + 1)},   r > 0,

and sigma is a finite sum of atoms.  Every integral against the measure is a
one-dimensional radial integral per atom.  Those are split at
``QuadratureSpec.split_point``: the inner piece is integrated in the variable
s = log r (which removes the algebraic singularity at the origin), the middle
piece directly, and the exponential tail beyond the cutoff R analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special

from .errors import DomainError, UnsupportedDimensionError

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and splitting rules for every radial integral."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    split_point: float = 1.0
    limit: int = 400

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise DomainError("quadrature tolerances must be positive")
        if self.split_point <= 0:
            raise DomainError("split_point must be positive")

    def cutoff(self, decay: float, scale: float = 1.0, power: float = 0.0) -> float:
        """Radius R beyond which scale * r^power * e^{-decay r} is below abs_tol."""
        r = self.split_point
        target = math.log(max(scale, 1e-300) / self.abs_tol)
        # Fixed-point iteration on decay * R = target + power * log R.
        for _ in range(50):
            r_new = max(self.split_point, (target + power * math.log(max(r, 1.0))) / decay)
            if abs(r_new - r) < 1e-9:
                break
            r = r_new
        return max(r, self.split_point) + 1.0

    def halved(self) -> "QuadratureSpec":
        return QuadratureSpec(self.rel_tol / 2, self.abs_tol / 2, self.split_point, self.limit)


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class Direction:
    """One atom of the spherical measure: unit vector xi, weight sigma, value f(xi)."""

    xi: tuple[float, ...]
    sigma: float
    f: float


@dataclass(frozen=True)
class LampertiCharacteristics:
    """Triplet (alpha, f, sigma) with linear term theta and optional drift.

    In dimension one the conventional names are exposed as properties:
    ``beta = f(+1)``, ``rho = f(-1)``, ``c_plus = sigma({+1})`` and
    ``c_minus = sigma({-1})``.  A missing atom has weight 0.
    """

    alpha: float
    directions: tuple[Direction, ...]
    theta: tuple[float, ...] = (0.0,)
    drift: tuple[float, ...] | None = None

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise DomainError(f"alpha must lie in (0, 2), got {self.alpha}")
        if len(self.directions) == 0:
            raise DomainError("at least one direction is required")
        dim = len(self.directions[0].xi)
        for k, d in enumerate(self.directions):
            if len(d.xi) != dim:
                raise DomainError(f"direction {k} has dimension {len(d.xi)}, expected {dim}")
            if not d.sigma > 0:
                raise DomainError(f"direction {k}: sigma must be positive, got {d.sigma}")
            if abs(math.hypot(*d.xi) - 1.0) > 1e-9:
                raise DomainError(f"direction {k}: xi must be a unit vector")
            if not d.f < self.alpha + 1.0:
                raise DomainError(
                    f"direction {k}: f = {d.f} violates f < alpha + 1 = {self.alpha + 1.0}"
                )
        if len(self.theta) != dim:
            raise DomainError(f"theta has dimension {len(self.theta)}, expected {dim}")
        if self.drift is not None and len(self.drift) != dim:
            raise DomainError(f"drift has dimension {len(self.drift)}, expected {dim}")

    @classmethod
    def one_dim(
        cls,
        alpha: float,
        beta: float = 0.0,
        rho: float = 0.0,
        c_plus: float = 1.0,
        c_minus: float = 1.0,
        theta: float = 0.0,
        drift: float | None = None,
    ) -> "LampertiCharacteristics":
        """Build one-dimensional characteristics; atoms with zero weight are dropped."""
        dirs = []
        if c_plus > 0:
            dirs.append(Direction((1.0,), float(c_plus), float(beta)))
        if c_minus > 0:
            dirs.append(Direction((-1.0,), float(c_minus), float(rho)))
        return cls(
            float(alpha),
            tuple(dirs),
            (float(theta),),
            None if drift is None else (float(drift),),
        )

    def replace(self, **changes) -> "LampertiCharacteristics":
        """Return one-dimensional characteristics with some named parameters changed."""
        self._require_1d()
        params = dict(
            alpha=self.alpha,
            beta=self.beta,
            rho=self.rho,
            c_plus=self.c_plus,
            c_minus=self.c_minus,
            theta=self.theta[0],
            drift=None if self.drift is None else self.drift[0],
        )
        params.update(changes)
        return LampertiCharacteristics.one_dim(**params)

    @property
    def dim(self) -> int:
        return len(self.directions[0].xi)

    @property
    def gamma(self) -> float:
        """Largest value of f over the support of sigma."""
        return max(d.f for d in self.directions)

    def _require_1d(self):
        if self.dim != 1:
            raise UnsupportedDimensionError("operation is only available in dimension 1")

    def _atom(self, sign: float) -> Direction | None:
        self._require_1d()
        for d in self.directions:
            if d.xi[0] == sign:
                return d
        return None

    @property
    def c_plus(self) -> float:
        a = self._atom(1.0)
        return 0.0 if a is None else a.sigma

    @property
    def c_minus(self) -> float:
        a = self._atom(-1.0)
        return 0.0 if a is None else a.sigma

    @property
    def beta(self) -> float:
        a = self._atom(1.0)
        return 0.0 if a is None else a.f

    @property
    def rho(self) -> float:
        a = self._atom(-1.0)
        return 0.0 if a is None else a.f

    @property
    def drift_value(self) -> float:
        """Drift coefficient in dimension one (0 when unspecified)."""
        self._require_1d()
        return 0.0 if self.drift is None else self.drift[0]

    @property
    def total_mass(self) -> float:
        return float(sum(d.sigma for d in self.directions))


# ---------------------------------------------------------------------------
# pointwise density


def log_expm1(r):
    """log(e^r - 1) for r > 0, accurate both near 0 and for large r."""
    r = np.asarray(r, dtype=float)
    small = r < 1e-8
    big = r > 30.0
    mid = ~(small | big)
    out = np.empty_like(r)
    # e^r - 1 = r e^{r theta_r} with theta_r -> 1/2 as r -> 0.
    out[small] = np.log(r[small]) + r[small] / 2.0
    out[big] = r[big] + np.log1p(-np.exp(-r[big]))
    out[mid] = np.log(np.expm1(r[mid]))
    return out if out.ndim else float(out)


def log_expm1_scalar(r: float) -> float:
    """Scalar version of :func:`log_expm1` for use inside quadrature integrands."""
    if r < 1e-8:
        return math.log(r) + r / 2.0
    if r > 30.0:
        return r + math.log1p(-math.exp(-r))
    return math.log(math.expm1(r))


def radial_density(alpha: float, f: float, sigma, r):
    """sigma * e^{r f} (e^r - 1)^{-(alpha + 1)} evaluated in log space."""
    r = np.asarray(r, dtype=float)
    return sigma * np.exp(r * f - (alpha + 1.0) * log_expm1(r))


def density(chars: LampertiCharacteristics, direction_index: int, r: float) -> float:
    """Radial Levy density along ``chars.directions[direction_index]``."""
    if not r > 0:
        raise DomainError(f"density requires r > 0, got {r}")
    d = chars.directions[direction_index]
    return float(radial_density(chars.alpha, d.f, d.sigma, r))


# ---------------------------------------------------------------------------
# radial integration


_SMALL_R = 1e-8


def radial_integral(
    alpha: float,
    f: float,
    power: float,
    lower: float,
    upper: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Integral of r^power e^{rf} (e^r - 1)^{-(alpha+1)} over [lower, upper].

    ``lower`` may be 0 (the caller is responsible for integrability, i.e.
    power > alpha) and ``upper`` may be ``inf``.
    """
    if upper <= lower:
        return 0.0
    decay = alpha + 1.0 - f
    split = spec.split_point
    total = 0.0
    kw = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.limit)

    def g_log(s):
        r = math.exp(s)
        if r == 0.0:
            return 0.0
        return math.exp((power + 1.0) * s + r * f - (alpha + 1.0) * log_expm1_scalar(r))

    def g(r):
        return r**power * math.exp(r * f - (alpha + 1.0) * log_expm1_scalar(r))

    a = lower
    if a == 0.0:
        # On (0, r0] the density is r^{-(alpha+1)} (1 + (f - (alpha+1)/2) r + O(r^2)),
        # integrated exactly; this matters when power - alpha is close to 0.
        r0 = min(_SMALL_R, upper)
        q = power - alpha
        total += r0**q / q + (f - 0.5 * (alpha + 1.0)) * r0 ** (q + 1.0) / (q + 1.0)
        a = r0
    if a < split and a < upper:
        b = min(split, upper)
        total += integrate.quad(g_log, math.log(a), math.log(b), **kw)[0]
        a = b
    if a >= upper:
        return total
    if math.isinf(upper):
        cut = max(a, spec.cutoff(decay, 1.0, power))
        if cut > a:
            # Break long ranges into unit-decay chunks to help the adaptive rule.
            edges = np.unique(np.concatenate([np.arange(a, cut, 8.0 / decay), [cut]]))
            for lo, hi in zip(edges[:-1], edges[1:]):
                total += integrate.quad(g, lo, hi, **kw)[0]
        total += _exponential_remainder(alpha, f, power, cut)
        return total
    edges = np.unique(np.concatenate([np.arange(a, upper, 8.0 / max(decay, 1e-3)), [upper]]))
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(g, lo, hi, **kw)[0]
    return total


def _exponential_remainder(alpha: float, f: float, power: float, cut: float) -> float:
    """Leading-order value of the integral beyond ``cut`` where (e^r-1)^{-(a+1)} ~ e^{-(a+1)r}."""
    decay = alpha + 1.0 - f
    upper_gamma = special.gammaincc(power + 1.0, decay * cut) * special.gamma(power + 1.0)
    return float(upper_gamma / decay ** (power + 1.0))


def tail(
    chars: LampertiCharacteristics,
    direction_index: int,
    x: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Mass of the radial measure on [x, inf) along one direction."""
    if not x > 0:
        raise DomainError(f"tail requires x > 0, got {x}")
    d = chars.directions[direction_index]
    return d.sigma * radial_integral(chars.alpha, d.f, 0.0, x, math.inf, spec)


@dataclass(frozen=True)
class MomentResult:
    """Value of a truncated moment; ``divergent`` marks an infinite integral."""

    value: float
    divergent: bool = False


def truncated_moment(
    chars: LampertiCharacteristics,
    p: float,
    region: str,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> MomentResult:
    """Integral of ||x||^p over the unit ball (``inner``) or its complement (``outer``)."""
    if p <= 0:
        raise DomainError("moment order p must be positive")
    if region == "inner":
        if p <= chars.alpha:
            return MomentResult(math.inf, divergent=True)
        lo, hi = 0.0, 1.0
    elif region == "outer":
        lo, hi = 1.0, math.inf
    else:
        raise DomainError(f"unknown region {region!r}")
    total = sum(d.sigma * radial_integral(chars.alpha, d.f, p, lo, hi, spec) for d in chars.directions)
    return MomentResult(float(total))


def exp_moment_threshold(chars: LampertiCharacteristics) -> float:
    """Order below which exponential moments are finite: alpha + 1 - max f."""
    return chars.alpha + 1.0 - chars.gamma


def _first_moment_vector(chars, lo, hi, spec):
    out = np.zeros(chars.dim)
    for d in chars.directions:
        out += np.asarray(d.xi) * d.sigma * radial_integral(chars.alpha, d.f, 1.0, lo, hi, spec)
    return out


def eta_centering(
    chars: LampertiCharacteristics,
    regime: str,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> np.ndarray:
    """Centering vector for the short-time stable or long-time Gaussian limits."""
    a = chars.alpha
    if regime == "short_time":
        if a == 1.0:
            return np.zeros(chars.dim)
        if a < 1.0:
            return _first_moment_vector(chars, 0.0, 1.0, spec)
        return _first_moment_vector(chars, 1.0, math.inf, spec)
    if regime == "long_time":
        return -_first_moment_vector(chars, 1.0, math.inf, spec)
    raise DomainError(f"unknown regime {regime!r}")


def covariance_matrix(
    chars: LampertiCharacteristics, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> np.ndarray:
    """Second-moment matrix of the Levy measure, sum_k sigma_k xi xi^T int r^2 density."""
    d = chars.dim
    out = np.zeros((d, d))
    for atom in chars.directions:
        xi = np.asarray(atom.xi)
        out += atom.sigma * np.outer(xi, xi) * radial_integral(chars.alpha, atom.f, 2.0, 0.0, math.inf, spec)
    return 0.5 * (out + out.T)


# ---------------------------------------------------------------------------
# structural constants of the closed-form exponent


def _one_minus_x_minus_emx(x: float) -> float:
    """1 - x - e^{-x}, with the small-x series to avoid cancellation."""
    if x < 1e-3:
        return -(x * x) * (0.5 - x / 6.0 + x * x / 24.0 - x**3 / 120.0)
    return -(math.expm1(-x) + x)


def tilde_constant(alpha: float, f: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """The constant built from three integrals entering the linear term (a~ or b~)."""
    kw = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.limit)

    def one_minus_emx_pow(x, p):
        return (-math.expm1(-x)) ** p

    def i1(x):
        return x * math.exp(-x) * (-math.expm1(-(alpha - f) * x)) / one_minus_emx_pow(x, alpha + 1.0)

    def i2(x):
        return math.exp(-x) * _one_minus_x_minus_emx(x) / one_minus_emx_pow(x, alpha + 1.0)

    def i3(x):
        return math.exp(-x) / one_minus_emx_pow(x, alpha)

    first = integrate.quad(i1, 0.0, 1.0, **kw)[0]
    second = integrate.quad(i2, 0.0, 1.0, **kw)[0]
    third = integrate.quad(i3, 1.0, math.inf, **kw)[0]
    return first + second + third


@dataclass(frozen=True)
class StructuralConstants:
    a_tilde_beta: float | None
    b_tilde_rho: float | None
    theta_tilde: float


def structural_constants(
    chars: LampertiCharacteristics, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> StructuralConstants:
    """Constants a~_beta, b~_rho and the effective linear coefficient theta~.

    theta~ is the coefficient of i*lambda in the closed-form exponent.  For
    alpha < 1 it is minus the drift; otherwise it collects theta and the
    first-moment corrections of the two half-lines.
    """
    chars._require_1d()
    a = chars.alpha
    cp, cm = chars.c_plus, chars.c_minus
    a_t = tilde_constant(a, chars.beta, spec) if cp > 0 else None
    b_t = tilde_constant(a, chars.rho, spec) if cm > 0 else None
    if a < 1.0:
        return StructuralConstants(a_t, b_t, -effective_drift(chars, spec))
    if a == 1.0:
        extra = (cp - cm) * (1.0 - EULER_GAMMA)
    else:
        extra = (cp - cm) / (a - 1.0)
    corr = cp * (a_t or 0.0) - cm * (b_t or 0.0) + extra
    return StructuralConstants(a_t, b_t, chars.theta[0] - corr)


def effective_drift(chars: LampertiCharacteristics, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Drift coefficient d for alpha < 1 (one dimension).

    Uses the explicit ``drift`` when given; otherwise d = -theta - int_{|x|<=1} x nu(dx).
    """
    chars._require_1d()
    if chars.alpha >= 1.0:
        raise DomainError("the drift coefficient is only defined for alpha < 1")
    if chars.drift is not None:
        return chars.drift[0]
    return -chars.theta[0] - float(_first_moment_vector(chars, 0.0, 1.0, spec)[0])
