"""Characteristic and Laplace exponents, the quadrature oracle and FFT densities.

Conventions: E exp(i lam X_t) = exp(-t Psi(lam)); for subordinators
E exp(-lam X_t) = exp(-t Phi(lam)); for spectrally negative processes
E exp(lam X_t) = exp(t Phi(lam)).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from . import specfun
from .errors import ConvergenceError, DomainError
from .measure import (
    DEFAULT_QUADRATURE,
    LampertiCharacteristics,
    QuadratureSpec,
    effective_drift,
    log_expm1_scalar,
    radial_integral,
    structural_constants,
)


class ResolutionWarning(UserWarning):
    """The frequency cutoff of an FFT inversion does not resolve the characteristic function."""


def _rgamma(z: complex) -> complex:
    """1/Gamma(z), equal to 0 at the poles of Gamma."""
    try:
        return cmath.exp(-specfun.log_gamma(z))
    except DomainError:
        return 0.0 + 0.0j


def _poch(z: complex, a: float) -> complex:
    """(z)_a with the removable value 0 when z is a pole of Gamma but z + a is not."""
    try:
        num = specfun.log_gamma(z + a)
    except DomainError as exc:
        raise DomainError(f"Gamma ratio has a pole at argument {z + a}") from exc
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        return 0.0 + 0.0j
    return cmath.exp(num - specfun.log_gamma(z))


def _z_psi(z: complex) -> complex:
    """z * psi(z + 1), the combination appearing in the alpha = 1 exponent."""
    return z * specfun.digamma(z + 1.0)


def _check_poles(chars: LampertiCharacteristics):
    a = chars.alpha
    for name, val, weight in (("beta", chars.beta, chars.c_plus), ("rho", chars.rho, chars.c_minus)):
        if weight == 0:
            continue
        z = 1.0 - val + a if a != 1.0 else 2.0 - val
        if z <= 0 and z == math.floor(z):
            raise DomainError(f"{name} = {val} puts a pole of the Gamma ratio at {z}")


def char_exponent(
    chars: LampertiCharacteristics,
    lam: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    theta_tilde: float | None = None,
) -> complex:
    """Closed-form characteristic exponent in dimension one.

    ``theta_tilde`` may be passed to skip recomputing the structural constants
    when the exponent is evaluated on many points.
    """
    chars._require_1d()
    _check_poles(chars)
    a = chars.alpha
    if theta_tilde is None:
        theta_tilde = structural_constants(chars, spec).theta_tilde
    lam = float(lam)
    cp, cm, b, r = chars.c_plus, chars.c_minus, chars.beta, chars.rho
    out = 1j * lam * theta_tilde
    if a == 1.0:
        if cp > 0:
            out -= cp * (_z_psi(-1j * lam + 1.0 - b) - _z_psi(complex(1.0 - b)))
        if cm > 0:
            out -= cm * (_z_psi(1j * lam + 1.0 - r) - _z_psi(complex(1.0 - r)))
        return complex(out)
    g = specfun.real_gamma(-a)
    if cp > 0:
        out -= cp * g * (_poch(-1j * lam + 1.0 - b, a) - _poch(complex(1.0 - b), a))
    if cm > 0:
        out -= cm * g * (_poch(1j * lam + 1.0 - r, a) - _poch(complex(1.0 - r), a))
    return complex(out)


# ---------------------------------------------------------------------------
# quadrature oracle


def _sin_minus_linear(x: float) -> float:
    """x - sin(x), with its series near 0."""
    if abs(x) < 1e-3:
        x2 = x * x
        return x * x2 / 6.0 * (1.0 - x2 / 20.0 + x2 * x2 / 840.0)
    return x - math.sin(x)


_SMALL_R = 1e-8


def levy_khintchine_atom(
    log_kernel: Callable[[float], float],
    alpha: float,
    tail_beyond_one: float,
    mu: float,
    compensated: bool,
    spec: QuadratureSpec,
) -> complex:
    """Integral of (1 - e^{i mu r} + i mu r 1_{r<1}[compensated]) k(r) dr over r > 0.

    ``log_kernel`` is log k(r); k must behave like r^{-(alpha+1)} near 0.  The
    piece on (0, 1e-8) is taken from that leading behaviour, (1e-8, 1) is
    integrated in s = log r, and [1, inf) uses Fourier-weighted quadrature
    together with ``tail_beyond_one``, the mass of k on [1, inf).
    """
    if mu == 0.0:
        return 0.0 + 0.0j
    kw = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.limit)
    eps = _SMALL_R
    a = alpha

    def re_inner(s):
        r = math.exp(s)
        return 2.0 * math.sin(mu * r / 2.0) ** 2 * math.exp(s + log_kernel(r))

    def im_inner(s):
        r = math.exp(s)
        val = _sin_minus_linear(mu * r) if compensated else -math.sin(mu * r)
        return val * math.exp(s + log_kernel(r))

    s_lo = math.log(eps)
    re = integrate.quad(re_inner, s_lo, 0.0, **kw)[0]
    im = integrate.quad(im_inner, s_lo, 0.0, **kw)[0]
    # Leading-order contribution of (0, eps), where k(r) ~ r^{-(alpha+1)}.
    re += mu * mu * eps ** (2.0 - a) / (2.0 * (2.0 - a))
    if compensated:
        im += mu**3 * eps ** (3.0 - a) / (6.0 * (3.0 - a))
    else:
        im -= mu * eps ** (1.0 - a) / (1.0 - a)

    def kernel(r):
        return math.exp(log_kernel(r))

    w = abs(mu)
    sgn = 1.0 if mu > 0 else -1.0
    cos_part = integrate.quad(kernel, 1.0, math.inf, weight="cos", wvar=w, limlst=200)[0]
    sin_part = integrate.quad(kernel, 1.0, math.inf, weight="sin", wvar=w, limlst=200)[0]
    re += tail_beyond_one - cos_part
    im -= sgn * sin_part
    return complex(re, im)


def char_exponent_oracle(
    chars: LampertiCharacteristics,
    lam: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> complex:
    """Characteristic exponent by direct quadrature of the Levy-Khintchine integral.

    For alpha < 1 the uncompensated form with drift d is used; for alpha >= 1 the
    compensator i lam x 1_{|x|<1} and the linear term theta.
    """
    chars._require_1d()
    lam = float(lam)
    if lam == 0.0:
        return 0.0 + 0.0j
    a = chars.alpha
    compensated = a >= 1.0
    total = 0.0 + 0.0j
    for atom in chars.directions:
        f = atom.f

        def log_kernel(r, f=f):
            return r * f - (a + 1.0) * log_expm1_scalar(r)

        t1 = radial_integral(a, f, 0.0, 1.0, math.inf, spec)
        total += atom.sigma * levy_khintchine_atom(
            log_kernel, a, t1, lam * atom.xi[0], compensated, spec
        )
    if compensated:
        total += 1j * lam * chars.theta[0]
    else:
        total -= 1j * lam * effective_drift(chars, spec)
    return complex(total)


@dataclass(frozen=True)
class ExponentEvaluation:
    lam: float
    closed_form: complex
    oracle: complex | None = None
    abs_error: float | None = None


def evaluate(chars, lam, with_oracle=False, spec=DEFAULT_QUADRATURE, theta_tilde=None) -> ExponentEvaluation:
    cf = char_exponent(chars, lam, spec, theta_tilde)
    if not with_oracle:
        return ExponentEvaluation(float(lam), cf)
    orc = char_exponent_oracle(chars, lam, spec)
    return ExponentEvaluation(float(lam), cf, orc, abs(cf - orc))


# ---------------------------------------------------------------------------
# Laplace exponents


def _require_subordinator(chars: LampertiCharacteristics) -> float:
    chars._require_1d()
    if not chars.alpha < 1.0:
        raise DomainError("subordinator Laplace exponent requires alpha in (0, 1)")
    if chars.c_minus != 0.0:
        raise DomainError("subordinator Laplace exponent requires no negative jumps")
    d = effective_drift(chars)
    if d < 0:
        raise DomainError(f"subordinator requires a nonnegative drift, got {d}")
    return d


def laplace_subordinator(chars: LampertiCharacteristics, lam: float) -> float:
    """Phi(lam) = d lam - c+ Gamma(-alpha) [(lam+1-beta)_alpha - (1-beta)_alpha]."""
    d = _require_subordinator(chars)
    if lam < 0:
        raise DomainError("lambda must be nonnegative")
    a, b = chars.alpha, chars.beta
    g = specfun.real_gamma(-a)
    val = d * lam - chars.c_plus * g * (_poch(complex(lam + 1.0 - b), a) - _poch(complex(1.0 - b), a))
    return float(val.real)


def _require_spectrally_negative(chars: LampertiCharacteristics):
    chars._require_1d()
    if not 1.0 < chars.alpha < 2.0:
        raise DomainError("spectrally negative Laplace exponent requires alpha in (1, 2)")
    if chars.c_plus != 0.0:
        raise DomainError("spectrally negative Laplace exponent requires no positive jumps")


def laplace_spectrally_negative(
    chars: LampertiCharacteristics, lam: float, theta_tilde: float | None = None
) -> float:
    """Phi(lam) = -theta~ lam + c- Gamma(-alpha) [(lam+1-rho)_alpha - (1-rho)_alpha]."""
    _require_spectrally_negative(chars)
    if lam < 0:
        raise DomainError("lambda must be nonnegative")
    if theta_tilde is None:
        theta_tilde = structural_constants(chars).theta_tilde
    a, r = chars.alpha, chars.rho
    g = specfun.real_gamma(-a)
    val = -theta_tilde * lam + chars.c_minus * g * (
        _poch(complex(lam + 1.0 - r), a) - _poch(complex(1.0 - r), a)
    )
    return float(val.real)


def _drgamma(z: float) -> float:
    """Derivative of 1/Gamma at z, including the poles of Gamma."""
    if z <= 0 and z == math.floor(z):
        n = int(-z)
        return float((-1) ** n * math.factorial(n))
    return float((-specfun.digamma(z) * _rgamma(z)).real)


def laplace_derivative_at_zero(chars: LampertiCharacteristics) -> float:
    """Right derivative at 0 of the spectrally negative Laplace exponent with theta~ = 0.

    Equals c- Gamma(-alpha) (1-rho)_alpha (psi(1-rho+alpha) - psi(1-rho)), written as
    c- Gamma(-alpha) Gamma(z+alpha) [psi(z+alpha)/Gamma(z) + (1/Gamma)'(z)] with z = 1-rho
    so that it stays finite when z is a pole of Gamma.
    """
    _require_spectrally_negative(chars)
    a, r = chars.alpha, chars.rho
    z = 1.0 - r
    lead = chars.c_minus * specfun.real_gamma(-a) * specfun.real_gamma(z + a)
    inner = (specfun.digamma(z + a) * _rgamma(z)).real + _drgamma(z)
    return float(lead * inner)


# ---------------------------------------------------------------------------
# FFT density


@dataclass(frozen=True)
class DensityTable:
    x: np.ndarray
    pdf: np.ndarray


def density_via_fft(
    chars: LampertiCharacteristics,
    t: float,
    grid_size: int = 4096,
    cutoff: float = 200.0,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> DensityTable:
    """Density of X_t by discrete Fourier inversion of exp(-t Psi).

    The frequency grid is lam_k = (k - n/2) dlam on [-cutoff, cutoff) and the
    spatial grid x_j = (j - n/2 + 1/2) dx with dx = 2 pi / (n dlam).
    """
    chars._require_1d()
    if t <= 0:
        raise DomainError("t must be positive")
    n = int(grid_size)
    if n < 2 or n & (n - 1):
        raise DomainError("grid_size must be a power of two")
    theta_tilde = structural_constants(chars, spec).theta_tilde
    dlam = 2.0 * cutoff / n
    # lambda grid contains 0 (so the density sums to phi(0) = 1 exactly);
    # the x grid carries the half-sample shift and is symmetric about 0.
    lam = (np.arange(n) - n // 2) * dlam
    # Psi(-lam) = conj(Psi(lam)): evaluate on lam >= 0 only.
    pos = np.array([char_exponent(chars, v, spec, theta_tilde) for v in lam[n // 2 :]])
    psi = np.concatenate([[np.conj(char_exponent(chars, cutoff, spec, theta_tilde))], np.conj(pos[1:][::-1]), pos])
    phi = np.exp(-t * psi)
    edge = abs(phi[0])
    if edge > 1e-8:
        warnings.warn(
            f"|characteristic function| = {edge:.2e} at the frequency cutoff; raise the cutoff",
            ResolutionWarning,
            stacklevel=2,
        )
    dx = 2.0 * math.pi / (n * dlam)
    x = (np.arange(n) - n // 2 + 0.5) * dx
    # pdf(x_j) = (dlam / 2 pi) sum_k phi_k exp(-i lam_k x_j), and
    # lam_k x_j = lam_k x_0 + lam_0 j dx + 2 pi k j / n because dlam dx = 2 pi / n.
    j = np.arange(n)
    vals = np.fft.fft(phi * np.exp(-1j * lam * x[0])) * np.exp(-1j * lam[0] * j * dx)
    pdf = (vals * dlam / (2.0 * math.pi)).real
    return DensityTable(x, pdf)
