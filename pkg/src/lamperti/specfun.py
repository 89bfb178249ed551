"""Complex-argument Gamma-family functions.

Log-Gamma uses a Lanczos approximation (g = 7, nine coefficients) for
Re(z) >= 0.5.  To the left it shifts the argument with
log Gamma(z) = log Gamma(z + n) - sum_k log(z + k), which keeps the standard
branch (continuous off the negative real axis, as in scipy and mpmath); far to
the left (Re(z) < -200) it falls back to the reflection formula, which is
correct modulo 2 pi i.  Digamma uses the Stirling-type asymptotic
series after shifting the argument to Re(z) >= 10 with the recurrence
psi(z) = psi(z + 1) - 1/z.

All functions accept Python scalars or numpy arrays and return complex values
(``ComplexScalar`` is simply Python's ``complex``).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError

ComplexScalar = complex

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

# Bernoulli numbers B_2k / (2k) for the digamma asymptotic expansion.
_DIGAMMA_ASYMP = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)


def _check_pole(z: complex, name: str) -> None:
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise DomainError(f"{name}: argument {z.real:g} is a pole of the Gamma function")


def _lanczos_log_gamma(z: complex) -> complex:
    """Lanczos approximation, valid for Re(z) >= 0.5."""
    z = z - 1.0
    acc = complex(_LANCZOS_COEF[0])
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _log_sin_pi(z: complex) -> complex:
    """log(sin(pi z)) that does not overflow for large |Im z|."""
    y = z.imag
    if abs(y) < 20.0:
        return cmath.log(cmath.sin(math.pi * z))
    # sin(pi z) = (e^{i pi z} - e^{-i pi z}) / (2i); keep only the dominant exponential.
    if y > 0:
        return -1j * math.pi * z + cmath.log(1.0 - cmath.exp(2j * math.pi * z)) + cmath.log(0.5j)
    return 1j * math.pi * z + cmath.log(1.0 - cmath.exp(-2j * math.pi * z)) - cmath.log(2j)


_RECURRENCE_LIMIT = -200.0


def _log_gamma_scalar(z: complex) -> complex:
    _check_pole(z, "log_gamma")
    if z.real >= 0.5:
        return _lanczos_log_gamma(z)
    if z.real < _RECURRENCE_LIMIT:
        return _LOG_PI - _log_sin_pi(z) - _lanczos_log_gamma(1.0 - z)
    n = math.ceil(0.5 - z.real)
    shift = 0.0 + 0.0j
    for k in range(n):
        shift += cmath.log(z + k)
    return _lanczos_log_gamma(z + n) - shift


def _digamma_scalar(z: complex) -> complex:
    _check_pole(z, "digamma")
    if z.real < 0.5:
        # psi(1 - z) - psi(z) = pi cot(pi z)
        return _digamma_scalar(1.0 - z) - math.pi / cmath.tan(math.pi * z)
    shift = 0.0 + 0.0j
    while z.real < 10.0:
        shift -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0.0 + 0.0j
    power = inv2
    for coef in _DIGAMMA_ASYMP:
        series += coef * power
        power *= inv2
    return shift + cmath.log(z) - 0.5 / z - series


def _vectorize(fn, z):
    if np.ndim(z) == 0:
        return fn(complex(z))
    arr = np.asarray(z, dtype=complex)
    out = np.empty(arr.shape, dtype=complex)
    for idx, val in np.ndenumerate(arr):
        out[idx] = fn(complex(val))
    return out


def log_gamma(z):
    """Principal-branch log Gamma(z) for complex z (scalar or array)."""
    return _vectorize(_log_gamma_scalar, z)


def gamma(z):
    """Gamma(z) = exp(log_gamma(z))."""
    return np.exp(log_gamma(z)) if np.ndim(z) else cmath.exp(log_gamma(z))


def digamma(z):
    """Logarithmic derivative of the Gamma function."""
    return _vectorize(_digamma_scalar, z)


def _pochhammer_scalar(z: complex, a: float) -> complex:
    if a == 0.0:
        return 1.0 + 0.0j
    _check_pole(z + a, "pochhammer (numerator)")
    _check_pole(z, "pochhammer (denominator)")
    return cmath.exp(_log_gamma_scalar(z + a) - _log_gamma_scalar(z))


def pochhammer(z, a: float):
    """Pochhammer symbol (z)_a = Gamma(z + a) / Gamma(z), computed in log space."""
    a = float(a)
    return _vectorize(lambda w: _pochhammer_scalar(w, a), z)


def rising_factorial(z: float, n: int) -> float:
    """(z)_n = z (z+1) ... (z+n-1) for integer n >= 0, by direct recurrence.

    Unlike :func:`pochhammer` this is well defined when z is a nonpositive integer
    (for example (0)_n = 0 for n >= 1).
    """
    out = 1.0
    for k in range(n):
        out *= z + k
    return out


def beta(a, b) -> complex:
    """Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b) for Re(a), Re(b) > 0."""
    a = complex(a)
    b = complex(b)
    if a.real <= 0.0 or b.real <= 0.0:
        raise DomainError(f"beta requires Re(a) > 0 and Re(b) > 0, got a={a}, b={b}")
    return cmath.exp(_log_gamma_scalar(a) + _log_gamma_scalar(b) - _log_gamma_scalar(a + b))


def real_gamma(x: float) -> float:
    """Real Gamma function via :func:`log_gamma`, keeping the sign for negative x."""
    return cmath.exp(_log_gamma_scalar(complex(x))).real
