"""Series (LePage-type) simulation of Lamperti stable processes.

On a horizon [0, T] a path is approximated by

    X_t = sum_{i<=N} ( H(Gamma_i / T, V_i) V_i 1{U_i <= t} - c_i t / T ) - theta t,

where Gamma_i are arrival times of a unit Poisson process, U_i ~ U[0, T] and
V_i is a direction drawn with probabilities sigma_k / sigma(S).  H(., k) is
the generalized inverse of the radial tail of direction k, rescaled by the
total mass so that the jumps in direction k occur at rate sigma_k.  The
-theta t term matches the sign of theta in the characteristic exponent.

Random numbers come from counter-based Philox streams keyed by
(seed, path_index, variable kind), so a path does not depend on how many
other paths are generated or in which order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, interpolate

from .errors import ConvergenceError, DomainError
from .measure import (
    DEFAULT_QUADRATURE,
    LampertiCharacteristics,
    QuadratureSpec,
    density,
    log_expm1,
    radial_integral,
    tail,
)

_KIND_GAMMA, _KIND_TIME, _KIND_DIRECTION = 0, 1, 2

# Gauss-Legendre nodes for the cumulative tables.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)


# ---------------------------------------------------------------------------
# radial laws: tail, inverse tail and first moment along one direction


class RadialLaw:
    """Radial part of a Levy measure along one direction, with its weight sigma."""

    sigma: float

    def tail(self, x):
        raise NotImplementedError

    def inverse_tail(self, u):
        raise NotImplementedError

    def first_moment(self, a, b):
        """Integral of r * density over [a, b] (weighted by sigma)."""
        raise NotImplementedError

    def log_density(self, r):
        raise NotImplementedError


class StableRadialLaw(RadialLaw):
    """Density sigma r^{-(alpha+1)}."""

    def __init__(self, alpha: float, sigma: float):
        self.alpha = alpha
        self.sigma = sigma

    def tail(self, x):
        return self.sigma * np.asarray(x, dtype=float) ** (-self.alpha) / self.alpha

    def inverse_tail(self, u):
        return (self.alpha * np.asarray(u, dtype=float) / self.sigma) ** (-1.0 / self.alpha)

    def first_moment(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.alpha == 1.0:
            return self.sigma * np.log(b / a)
        e = 1.0 - self.alpha
        return self.sigma * (b**e - a**e) / e

    def log_density(self, r):
        return math.log(self.sigma) - (self.alpha + 1.0) * np.log(r)


class LampertiRadialLaw(RadialLaw):
    """Density sigma e^{r f} (e^r - 1)^{-(alpha+1)}, tabulated for fast inversion.

    The tail and the first moment on (x, 1] are tabulated on a log-spaced grid
    of x in [1e-12, 40] by cumulative Gauss-Legendre quadrature; the inverse
    tail is a cubic spline of log x against log tail.  Outside the grid the
    small-r power law and the large-r exponential asymptotics are used; both
    are accurate to better than 1e-12 relative there.
    """

    X_MIN = 1e-12
    X_MAX = 40.0
    N_GRID = 4000

    def __init__(self, alpha: float, f: float, sigma: float):
        self.alpha = float(alpha)
        self.f = float(f)
        self.sigma = float(sigma)
        self.decay = self.alpha + 1.0 - self.f
        s = np.linspace(math.log(self.X_MIN), math.log(self.X_MAX), self.N_GRID)
        h = s[1] - s[0]
        nodes = (s[:-1, None] + h * (_GL_X[None, :] + 1.0) / 2.0).ravel()
        r = np.exp(nodes)
        log_dens = r * self.f - (self.alpha + 1.0) * log_expm1(r)
        w = np.tile(_GL_W * h / 2.0, self.N_GRID - 1)
        piece0 = (w * np.exp(nodes + log_dens)).reshape(self.N_GRID - 1, -1).sum(axis=1)
        piece1 = (w * np.exp(2.0 * nodes + log_dens)).reshape(self.N_GRID - 1, -1).sum(axis=1)
        top = radial_integral(self.alpha, self.f, 0.0, self.X_MAX, math.inf)
        tail_unit = top + np.concatenate([np.cumsum(piece0[::-1])[::-1], [0.0]])
        self._s = s
        self._log_tail = np.log(self.sigma * tail_unit)
        # first moment from x to X_MAX; M(a, b) = m(a) - m(b)
        self._m = self.sigma * np.concatenate([np.cumsum(piece1[::-1])[::-1], [0.0]])
        self._inv = interpolate.CubicSpline(self._log_tail[::-1], s[::-1])
        self._fwd = interpolate.CubicSpline(s, self._log_tail)
        self._mspline = interpolate.CubicSpline(s, self._m)
        self._u_small = math.exp(self._log_tail[-1])
        self._u_big = math.exp(self._log_tail[0])

    def tail(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        lo = x < self.X_MIN
        hi = x > self.X_MAX
        mid = ~(lo | hi)
        out[mid] = np.exp(self._fwd(np.log(x[mid])))
        out[lo] = self._u_big + self.sigma * (x[lo] ** -self.alpha - self.X_MIN**-self.alpha) / self.alpha
        out[hi] = self.sigma * np.exp(-self.decay * x[hi]) / self.decay
        return out if out.ndim else float(out)

    def inverse_tail(self, u):
        u = np.asarray(u, dtype=float)
        out = np.empty_like(u)
        big = u > self._u_big
        small = u < self._u_small
        mid = ~(big | small)
        if self.f == 1.0:
            return np.log1p((self.alpha * u / self.sigma) ** (-1.0 / self.alpha))
        out[mid] = np.exp(self._inv(np.log(u[mid])))
        out[big] = (
            self.alpha * (u[big] - self._u_big) / self.sigma + self.X_MIN**-self.alpha
        ) ** (-1.0 / self.alpha)
        out[small] = -np.log(self.decay * u[small] / self.sigma) / self.decay
        return out if out.ndim else float(out)

    def _m_of(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        lo = x < self.X_MIN
        hi = x >= self.X_MAX
        mid = ~(lo | hi)
        out[mid] = self._mspline(np.log(x[mid]))
        out[hi] = 0.0
        a = self.alpha
        if a == 1.0:
            extra = self.sigma * np.log(self.X_MIN / x[lo])
        else:
            extra = self.sigma * (self.X_MIN ** (1 - a) - x[lo] ** (1 - a)) / (1 - a)
        out[lo] = self._m[0] + extra
        return out

    def first_moment(self, a, b):
        b = np.minimum(np.asarray(b, dtype=float), self.X_MAX)
        return self._m_of(a) - self._m_of(b)

    def log_density(self, r):
        return math.log(self.sigma) + r * self.f - (self.alpha + 1.0) * log_expm1(r)


@lru_cache(maxsize=64)
def _lamperti_law(alpha: float, f: float, sigma: float) -> LampertiRadialLaw:
    return LampertiRadialLaw(alpha, f, sigma)


def radial_laws(chars: LampertiCharacteristics) -> list[RadialLaw]:
    return [_lamperti_law(chars.alpha, d.f, d.sigma) for d in chars.directions]


def stable_laws(chars: LampertiCharacteristics) -> list[RadialLaw]:
    """Radial laws of the stable measure sigma(d xi) r^{-(alpha+1)} dr with the same sigma."""
    return [StableRadialLaw(chars.alpha, d.sigma) for d in chars.directions]


# ---------------------------------------------------------------------------
# inverse tail (accurate, per call)


def inverse_tail(
    chars: LampertiCharacteristics,
    direction_index: int,
    u: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    rtol: float = 1e-12,
) -> float:
    """inf{x > 0 : tail(x) < u} for the weighted tail of one direction.

    Closed form when f = 1; otherwise Newton iterations on measure.tail started
    from the tabulated inverse, safeguarded by a bisection bracket.
    """
    if not u > 0:
        raise DomainError(f"inverse_tail requires u > 0, got {u}")
    d = chars.directions[direction_index]
    a = chars.alpha
    if d.f == 1.0:
        return math.log1p((a * u / d.sigma) ** (-1.0 / a))
    law = _lamperti_law(a, d.f, d.sigma)
    x = float(law.inverse_tail(u))
    lo, hi = x * 0.5, x * 2.0
    while tail(chars, direction_index, lo, spec) < u:
        lo *= 0.5
    while tail(chars, direction_index, hi, spec) > u:
        hi *= 2.0
    for _ in range(100):
        t = tail(chars, direction_index, x, spec)
        err = t - u
        if abs(err) <= rtol * u:
            return x
        if err > 0:
            lo = x
        else:
            hi = x
        step = err / density(chars, direction_index, x)
        x_new = x + step
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 1e-15 * x:
            return x_new
        x = x_new
    raise ConvergenceError(f"inverse_tail did not converge for u = {u}")


# ---------------------------------------------------------------------------
# configuration and outputs


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation, horizon, seeding and sampling grid for the series."""

    horizon_T: float = 1.0
    n_terms: int = 10_000
    seed: int = 0
    n_paths: int = 1
    time_grid: tuple[float, ...] = (0.0, 1.0)

    def __post_init__(self):
        if not self.horizon_T > 0:
            raise DomainError("horizon_T must be positive")
        if self.n_terms < 1:
            raise DomainError("n_terms must be at least 1")
        if self.n_paths < 1:
            raise DomainError("n_paths must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        g = np.asarray(self.time_grid, dtype=float)
        if g.size == 0 or np.any(np.diff(g) < 0) or g[0] < 0 or g[-1] > self.horizon_T:
            raise DomainError("time_grid must be sorted within [0, horizon_T]")

    @classmethod
    def uniform_grid(cls, horizon_T=1.0, n_steps=100, **kw) -> "SeriesConfig":
        grid = tuple(np.linspace(0.0, horizon_T, n_steps + 1).tolist())
        return cls(horizon_T=horizon_T, time_grid=grid, **kw)


@dataclass
class SamplePath:
    times: np.ndarray
    values: np.ndarray  # shape (len(times), d)
    seed_used: int
    path_index: int
    n_terms_used: int
    truncation_bound: float
    centering_total: np.ndarray
    jump_times: np.ndarray = field(repr=False, default=None)
    jump_sizes: np.ndarray = field(repr=False, default=None)  # shape (n_terms, d)


def _stream(seed: int, path_index: int, kind: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(path_index, kind))
    return np.random.Generator(np.random.Philox(ss))


def _directions_matrix(chars: LampertiCharacteristics) -> tuple[np.ndarray, np.ndarray]:
    xi = np.array([d.xi for d in chars.directions], dtype=float)
    w = np.array([d.sigma for d in chars.directions], dtype=float)
    return xi, w / w.sum()


def _series_levels(laws, total_mass, gammas_over_T, k):
    """Jump radii for levels Gamma_i / T: invert sigma_k-weighted tail at sigma_k Gamma/(T |sigma|)."""
    out = np.empty_like(gammas_over_T)
    for j, law in enumerate(laws):
        m = k == j
        if np.any(m):
            out[m] = law.inverse_tail(gammas_over_T[m] * law.sigma / total_mass)
    return out


def centering_constants_from_laws(laws, xi, total_mass, horizon_T, n_terms) -> np.ndarray:
    """c_1..c_N for arbitrary radial laws; returns shape (N, d)."""
    i = np.arange(0, n_terms + 1, dtype=float)
    out = np.zeros((n_terms, xi.shape[1]))
    for j, law in enumerate(laws):
        v = i * law.sigma / (horizon_T * total_mass)
        x = np.empty_like(v)
        x[0] = np.inf
        x[1:] = law.inverse_tail(v[1:])
        upper = np.minimum(x[:-1], 1.0)
        lower = x[1:]
        lower_c = np.minimum(lower, upper)
        mom = np.where(lower < upper, law.first_moment(lower_c, upper), 0.0)
        out += horizon_T * mom[:, None] * xi[j][None, :]
    return out


def centering_constants(chars: LampertiCharacteristics, config: SeriesConfig) -> np.ndarray:
    """Centering constants c_i, i = 1..N, as an array of shape (N, d)."""
    xi, _ = _directions_matrix(chars)
    return centering_constants_from_laws(
        radial_laws(chars), xi, chars.total_mass, config.horizon_T, config.n_terms
    )


def truncation_error(chars: LampertiCharacteristics, config: SeriesConfig) -> float:
    """Size H(N/T) of the N-th jump at its mean arrival level, maximized over directions."""
    laws = radial_laws(chars)
    u = config.n_terms / config.horizon_T
    return float(max(law.inverse_tail(u * law.sigma / chars.total_mass) for law in laws))


def _simulate_with_laws(laws, xi, probs, total_mass, linear, config, centering_sum, path_indices):
    T = config.horizon_T
    N = config.n_terms
    grid = np.asarray(config.time_grid, dtype=float)
    d = xi.shape[1]
    out = []
    for p in path_indices:
        gam = np.cumsum(_stream(config.seed, p, _KIND_GAMMA).standard_exponential(N))
        times = _stream(config.seed, p, _KIND_TIME).uniform(0.0, T, N)
        if len(laws) == 1:
            k = np.zeros(N, dtype=np.int64)
        else:
            k = _stream(config.seed, p, _KIND_DIRECTION).choice(len(laws), size=N, p=probs)
        radii = _series_levels(laws, total_mass, gam / T, k)
        jumps = radii[:, None] * xi[k]
        order = np.argsort(times, kind="stable")
        cum = np.vstack([np.zeros((1, d)), np.cumsum(jumps[order], axis=0)])
        idx = np.searchsorted(times[order], grid, side="right")
        values = cum[idx] - np.outer(grid, centering_sum / T) + np.outer(grid, linear)
        trunc = float(radii[-1]) if N else 0.0
        out.append(
            SamplePath(
                times=grid.copy(),
                values=values,
                seed_used=config.seed,
                path_index=int(p),
                n_terms_used=N,
                truncation_bound=abs(trunc),
                centering_total=centering_sum.copy(),
                jump_times=times,
                jump_sizes=jumps,
            )
        )
    return out


def sample_path(
    chars: LampertiCharacteristics,
    config: SeriesConfig,
    path_indices=None,
) -> list[SamplePath]:
    """Generate ``config.n_paths`` truncated-series paths (or the given path indices)."""
    laws = radial_laws(chars)
    xi, probs = _directions_matrix(chars)
    c = centering_constants(chars, config).sum(axis=0)
    linear = -np.asarray(chars.theta, dtype=float)
    if path_indices is None:
        path_indices = range(config.n_paths)
    return _simulate_with_laws(laws, xi, probs, chars.total_mass, linear, config, c, path_indices)


def sample_stable_path(chars: LampertiCharacteristics, config: SeriesConfig, path_indices=None):
    """Paths of the stable process with measure sigma(d xi) r^{-(alpha+1)} dr and theta = 0."""
    laws = stable_laws(chars)
    xi, probs = _directions_matrix(chars)
    c = centering_constants_from_laws(laws, xi, chars.total_mass, config.horizon_T, config.n_terms).sum(axis=0)
    if path_indices is None:
        path_indices = range(config.n_paths)
    return _simulate_with_laws(laws, xi, probs, chars.total_mass, np.zeros(chars.dim), config, c, path_indices)


def terminal_values(
    chars: LampertiCharacteristics,
    n_paths: int,
    n_terms: int,
    seed: int,
    horizon: float = 1.0,
    stable: bool = False,
    batch: int = 512,
) -> np.ndarray:
    """X_T for many paths, vectorized over batches of paths; shape (n_paths, d).

    Equivalent to the last value of :func:`sample_path` on the grid (0, T), but
    avoids building per-path objects.
    """
    config = SeriesConfig(horizon_T=horizon, n_terms=n_terms, seed=seed, n_paths=n_paths, time_grid=(0.0, horizon))
    laws = stable_laws(chars) if stable else radial_laws(chars)
    xi, probs = _directions_matrix(chars)
    c = centering_constants_from_laws(laws, xi, chars.total_mass, horizon, n_terms).sum(axis=0)
    linear = np.zeros(chars.dim) if stable else -np.asarray(chars.theta, dtype=float)
    out = np.empty((n_paths, chars.dim))
    for start in range(0, n_paths, batch):
        idx = range(start, min(start + batch, n_paths))
        gam = np.stack([np.cumsum(_stream(seed, p, _KIND_GAMMA).standard_exponential(n_terms)) for p in idx])
        if len(laws) == 1:
            k = np.zeros_like(gam, dtype=np.int64)
        else:
            k = np.stack(
                [_stream(seed, p, _KIND_DIRECTION).choice(len(laws), size=n_terms, p=probs) for p in idx]
            )
        radii = _series_levels(laws, chars.total_mass, (gam / horizon).ravel(), k.ravel()).reshape(gam.shape)
        # every jump time is <= T, so all jumps count at t = T
        out[start : start + len(idx)] = np.einsum("pn,pnd->pd", radii, xi[k]) - c + horizon * linear
    return out


# ---------------------------------------------------------------------------
# density process with respect to the stable law


@dataclass(frozen=True)
class DensityProcessSample:
    times: np.ndarray
    log_density_values: np.ndarray
    epsilon: float


def log_radon_nikodym(chars: LampertiCharacteristics, direction_index: int, r):
    """phi(r) = log of (Lamperti density / stable density) = r f + (alpha+1)(ln r - ln(e^r - 1))."""
    d = chars.directions[direction_index]
    r = np.asarray(r, dtype=float)
    return r * d.f + (chars.alpha + 1.0) * (np.log(r) - log_expm1(r))


def compensator_difference(chars: LampertiCharacteristics, epsilon: float) -> float:
    """(nu - Pi)({|z| > epsilon}), with Pi the stable measure with the same sigma."""
    total = 0.0
    for k, d in enumerate(chars.directions):
        total += tail(chars, k, epsilon) - d.sigma * epsilon ** (-chars.alpha) / chars.alpha
    return total


def density_process(
    chars: LampertiCharacteristics,
    path: SamplePath,
    epsilon: float,
    path_law: str = "lamperti",
) -> DensityProcessSample:
    """Log Radon-Nikodym density process on the grid of ``path``, jumps above epsilon only.

    With ``path_law="lamperti"`` the path is a Lamperti path (law P) and the
    returned U_t = log dQ/dP|_t for Q the stable law:
        U_t = -sum_{s<=t, |dX|>eps} phi(|dX_s|) + t (nu - Pi)({|z| > eps}).
    With ``path_law="stable"`` the path is a stable path and U_t = log dP/dQ|_t,
    which is the same expression with the opposite overall sign.  In both cases
    exp(U_t) has expectation 1 under the law that generated the path.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    if path_law not in ("lamperti", "stable"):
        raise DomainError(f"unknown path_law {path_law!r}")
    sizes = np.linalg.norm(path.jump_sizes, axis=1)
    keep = sizes > epsilon
    times = path.jump_times[keep]
    sizes = sizes[keep]
    xi = np.array([d.xi for d in chars.directions])
    dirs = path.jump_sizes[keep] / sizes[:, None]
    k = np.argmax(dirs @ xi.T, axis=1)
    phi = np.empty_like(sizes)
    for j in range(len(chars.directions)):
        m = k == j
        phi[m] = log_radon_nikodym(chars, j, sizes[m])
    comp = compensator_difference(chars, epsilon)
    order = np.argsort(times)
    cum = np.concatenate([[0.0], np.cumsum(phi[order])])
    idx = np.searchsorted(times[order], path.times, side="right")
    u = -cum[idx] + path.times * comp
    if path_law == "stable":
        u = -u
    return DensityProcessSample(path.times.copy(), u, float(epsilon))


def mutual_ac_shift(chars: LampertiCharacteristics, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> np.ndarray:
    """Value of a - b required for mutual absolute continuity with the stable law."""
    a = chars.alpha
    out = np.zeros(chars.dim)
    kw = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.limit)
    for d in chars.directions:
        xi = np.asarray(d.xi)
        if a < 1.0:
            val = radial_integral(a, d.f, 1.0, 0.0, 1.0, spec)
        else:
            # r^2 (density - r^{-(alpha+1)}) = r^{1-alpha} expm1(r f - (alpha+1) log((e^r-1)/r)),
            # written without cancellation; integrate in s = log r.
            def g(s, f=d.f):
                r = math.exp(s)
                if r < 1e-3:
                    log_ratio = r / 2.0 + r * r / 24.0 - r**4 / 2880.0
                else:
                    log_ratio = math.log(math.expm1(r) / r)
                return r ** (1.0 - a) * math.expm1(r * f - (a + 1.0) * log_ratio)

            val = integrate.quad(g, -60.0, 0.0, **kw)[0]
            if a > 1.0:
                val -= 1.0 / a
        out += xi * d.sigma * val
    return out
