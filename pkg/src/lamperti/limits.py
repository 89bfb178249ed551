"""Monte Carlo checks of the short-time stable limit, the long-time Gaussian
limit and the Spitzer-type occupation estimate, via empirical characteristic
functions (ECF).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError
from .exponents import levy_khintchine_atom
from .measure import (
    DEFAULT_QUADRATURE,
    LampertiCharacteristics,
    QuadratureSpec,
    _first_moment_vector,
    covariance_matrix,
    log_expm1_scalar,
)
from .simulate import SeriesConfig, sample_path, terminal_values

DEFAULT_LAMBDA_GRID = tuple(np.linspace(-5.0, 5.0, 41))


@dataclass(frozen=True)
class ECFReport:
    lambda_grid: tuple[float, ...]
    empirical: tuple[complex, ...]
    reference: tuple[complex, ...]
    sup_distance: float
    n_samples: int
    h: float | None = None

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "n_samples": self.n_samples,
            "sup_distance": self.sup_distance,
            "lambda_grid": list(self.lambda_grid),
            "empirical": [[z.real, z.imag] for z in self.empirical],
            "reference": [[z.real, z.imag] for z in self.reference],
        }


def ecf(samples: Sequence[float], lambda_grid: Sequence[float]) -> np.ndarray:
    """(1/n) sum_j exp(i lam x_j) for each lam in the grid."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise DomainError("ecf requires at least one sample")
    lam = np.asarray(lambda_grid, dtype=float)
    out = np.empty(lam.shape, dtype=complex)
    for i, l in enumerate(lam.ravel()):
        out.flat[i] = np.mean(np.cos(l * x)) + 1j * np.mean(np.sin(l * x))
    return out


def _report(samples, lambda_grid, reference, h=None) -> ECFReport:
    emp = ecf(samples, lambda_grid)
    ref = np.asarray(reference, dtype=complex)
    return ECFReport(
        tuple(float(l) for l in lambda_grid),
        tuple(complex(z) for z in emp),
        tuple(complex(z) for z in ref),
        float(np.max(np.abs(emp - ref))),
        int(np.size(samples)),
        h,
    )


# ---------------------------------------------------------------------------
# stable reference


def stable_exponent(
    chars: LampertiCharacteristics,
    lam: float,
    compensation: str = "limit",
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> complex:
    """Exponent of the stable law with jump density sigma(d xi) r^{-(alpha+1)} dr.

    ``compensation="unit"`` uses the compensator i lam x 1_{|x|<1} for every
    alpha (the law of the truncated-series stable sampler at T = 1).
    ``compensation="limit"`` gives the short-time limit law: no compensator for
    alpha < 1, full compensator i lam x for alpha > 1, and the unit one at alpha = 1.
    """
    chars._require_1d()
    a = chars.alpha
    if lam == 0.0:
        return 0.0 + 0.0j
    if compensation not in ("unit", "limit"):
        raise DomainError(f"unknown compensation {compensation!r}")

    def log_kernel(r):
        return -(a + 1.0) * math.log(r)

    uncompensated = compensation == "limit" and a < 1.0
    total = 0.0 + 0.0j
    for d in chars.directions:
        mu = lam * d.xi[0]
        total += d.sigma * levy_khintchine_atom(log_kernel, a, 1.0 / a, mu, not uncompensated, spec)
        if compensation == "limit" and a > 1.0:
            total += 1j * mu * d.sigma / (a - 1.0)
    return complex(total)


def _difference_moment_unit(alpha: float, f: float, spec: QuadratureSpec) -> float:
    """int_0^1 r (e^{rf} (e^r-1)^{-(alpha+1)} - r^{-(alpha+1)}) dr, finite for alpha = 1."""

    def g(s):
        r = math.exp(s)
        if r == 0.0:
            return 0.0
        lam_term = math.exp(r * f - (alpha + 1.0) * log_expm1_scalar(r) + 2.0 * s)
        stab_term = math.exp((1.0 - alpha) * s)
        return lam_term - stab_term

    return integrate.quad(g, -60.0, 0.0, epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.limit)[0]


def short_time_centering(
    chars: LampertiCharacteristics, h: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """m(h) such that h^{-1/alpha}(X_h - h m(h)) converges to the stable law.

    alpha < 1: the drift -theta - int_{|x|<1} x nu(dx).
    alpha > 1: the mean -theta + int_{|x|>=1} x nu(dx).
    alpha = 1: -theta - int_{|x|<1} x (nu - Pi)(dx) + (c+ - c-) log h, which is 0
    for symmetric characteristics.
    """
    chars._require_1d()
    a, theta = chars.alpha, chars.theta[0]
    if a < 1.0:
        return float(-theta - _first_moment_vector(chars, 0.0, 1.0, spec)[0])
    if a > 1.0:
        return float(-theta + _first_moment_vector(chars, 1.0, math.inf, spec)[0])
    diff = sum(d.xi[0] * d.sigma * _difference_moment_unit(a, d.f, spec) for d in chars.directions)
    return float(-theta - diff + (chars.c_plus - chars.c_minus) * math.log(h))


def short_time_test(
    chars: LampertiCharacteristics,
    h_list: Sequence[float],
    n_paths: int,
    seed: int,
    n_terms: int = 10_000,
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> list[ECFReport]:
    """ECF distance between h^{-1/alpha}(X_h - h m(h)) and the stable limit, per h."""
    chars._require_1d()
    ref = np.exp([-stable_exponent(chars, l, "limit", spec) for l in lambda_grid])
    reports = []
    for h in h_list:
        if not h > 0:
            raise DomainError(f"h must be positive, got {h}")
        x = terminal_values(chars, n_paths, n_terms, seed, horizon=h)[:, 0]
        y = (x - h * short_time_centering(chars, h, spec)) * h ** (-1.0 / chars.alpha)
        reports.append(_report(y, lambda_grid, ref, h))
    return reports


def stable_calibration(
    chars: LampertiCharacteristics,
    n_paths: int,
    seed: int,
    n_terms: int = 10_000,
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> ECFReport:
    """ECF distance between stable series samples at T = 1 and their exact law."""
    ref = np.exp([-stable_exponent(chars, l, "unit", spec) for l in lambda_grid])
    x = terminal_values(chars, n_paths, n_terms, seed, stable=True)[:, 0]
    return _report(x, lambda_grid, ref, 1.0)


# ---------------------------------------------------------------------------
# long time


def long_time_test(
    chars: LampertiCharacteristics,
    h_list: Sequence[int],
    n_paths: int,
    seed: int,
    terms_per_unit: int = 100,
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> list[ECFReport]:
    """ECF distance between h^{-1/2}(X_h - h E X_1) and N(0, Sigma), per h.

    X_h is the sum of h independent unit-time increments, each a truncated
    series with ``terms_per_unit`` terms.  The smallest retained jump then
    matches that of a single series on [0, h] with h * terms_per_unit terms.
    """
    chars._require_1d()
    sigma2 = float(covariance_matrix(chars, spec)[0, 0])
    mean = float(-chars.theta[0] + _first_moment_vector(chars, 1.0, math.inf, spec)[0])
    lam = np.asarray(lambda_grid, dtype=float)
    ref = np.exp(-0.5 * lam**2 * sigma2)
    reports = []
    for h in h_list:
        if h < 1 or int(h) != h:
            raise DomainError(f"h must be an integer >= 1, got {h}")
        h = int(h)
        unit = terminal_values(chars, n_paths * h, terms_per_unit, seed)[:, 0]
        x = unit.reshape(n_paths, h).sum(axis=1)
        y = (x - h * mean) / math.sqrt(h)
        reports.append(_report(y, lambda_grid, ref, float(h)))
    return reports


# ---------------------------------------------------------------------------
# occupation of the positive half-line


@dataclass(frozen=True)
class SpitzerEstimate:
    t_grid: tuple[float, ...]
    positive_fraction: tuple[float, ...]
    running_average: tuple[float, ...]
    estimate: float
    std_error: float
    n_paths: int


def spitzer_study(
    chars: LampertiCharacteristics,
    t_grid: Sequence[float],
    n_paths: int,
    seed: int,
    n_terms: int = 10_000,
) -> SpitzerEstimate:
    """(1/t) int_0^t P(X_s >= 0) ds by the trapezoid rule on ``t_grid``.

    The standard error treats the per-path occupation fractions as i.i.d.
    """
    chars._require_1d()
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 2 or t[0] != 0.0 or np.any(np.diff(t) <= 0):
        raise DomainError("t_grid must be increasing, start at 0 and have at least two points")
    config = SeriesConfig(horizon_T=float(t[-1]), n_terms=n_terms, seed=seed, n_paths=n_paths, time_grid=tuple(t))
    paths = sample_path(chars, config)
    positive = np.stack([p.values[:, 0] >= 0.0 for p in paths]).astype(float)
    per_path = integrate.trapezoid(positive, t, axis=1) / t[-1]
    frac = positive.mean(axis=0)
    cum = integrate.cumulative_trapezoid(frac, t, initial=0.0)
    running = np.divide(cum, t, out=np.ones_like(cum), where=t > 0)
    est = float(per_path.mean())
    se = float(per_path.std(ddof=1) / math.sqrt(n_paths)) if n_paths > 1 else math.nan
    return SpitzerEstimate(tuple(t), tuple(frac), tuple(running), est, se, n_paths)


def spitzer_estimate(
    chars: LampertiCharacteristics,
    t_grid: Sequence[float],
    n_paths: int,
    seed: int,
    n_terms: int = 10_000,
) -> float:
    """Estimate at the largest time of the grid; see :func:`spitzer_study`."""
    return spitzer_study(chars, t_grid, n_paths, seed, n_terms).estimate
