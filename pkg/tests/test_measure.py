import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lamperti.errors import DomainError, UnsupportedDimensionError
from lamperti.measure import (
    DEFAULT_QUADRATURE,
    Direction,
    LampertiCharacteristics,
    covariance_matrix,
    density,
    eta_centering,
    exp_moment_threshold,
    structural_constants,
    tail,
    truncated_moment,
)

# Frozen mpmath quadrature values (30 digits).
DENSITY_R5 = 0.082921668001398913  # alpha=0.5, f=1, r=5
TAIL_F05_X1 = 0.51553310999424249  # alpha=0.5, f=0.5, x=1
TAIL_F1_X1 = 1.5257479567337804  # alpha=0.5, f=1, x=1: 2 / sqrt(e - 1)
OUTER_P1 = 4.1325066347390131  # int_1^inf r e^r (e^r-1)^{-1.5} dr
ETA_SHORT = 2.1506786724405733  # int_0^1 r e^r (e^r-1)^{-1.5} dr
COV = 17.420688722428817  # int_0^inf r^2 e^r (e^r-1)^{-1.5} dr
THETA_TILDE_15 = -2.5386241046714811  # alpha=1.5, beta=1, c+=1, c-=0, theta=0


def one_sided(alpha=0.5, beta=1.0):
    return LampertiCharacteristics.one_dim(alpha, beta=beta, c_plus=1.0, c_minus=0.0)


def test_validation():
    with pytest.raises(DomainError):
        LampertiCharacteristics.one_dim(2.0)
    with pytest.raises(DomainError, match="f < alpha"):
        LampertiCharacteristics.one_dim(0.5, beta=1.5)
    with pytest.raises(DomainError, match="unit"):
        LampertiCharacteristics(0.5, (Direction((0.5, 0.5), 1.0, 0.0),), (0.0, 0.0))
    with pytest.raises(DomainError, match="sigma"):
        LampertiCharacteristics(0.5, (Direction((1.0,), 0.0, 0.0),))


def test_one_dim_names():
    c = LampertiCharacteristics.one_dim(1.2, beta=0.3, rho=-0.2, c_plus=2.0, c_minus=0.5, theta=0.1)
    assert (c.beta, c.rho, c.c_plus, c.c_minus, c.theta) == (0.3, -0.2, 2.0, 0.5, (0.1,))
    assert c.gamma == 0.3
    assert c.replace(rho=0.9).rho == 0.9


def test_density_values():
    c = one_sided()
    assert density(c, 0, math.log(2.0)) == pytest.approx(2.0, rel=1e-14)
    assert density(c, 0, 5.0) == pytest.approx(DENSITY_R5, rel=1e-12)
    r = 1e-10
    assert density(c, 0, r) * r**1.5 == pytest.approx(1.0, rel=1e-9)
    with pytest.raises(DomainError):
        density(c, 0, 0.0)


def test_tail_values():
    assert tail(one_sided(), 0, 1.0) == pytest.approx(TAIL_F1_X1, rel=1e-10)
    assert tail(one_sided(beta=0.5), 0, 1.0) == pytest.approx(TAIL_F05_X1, rel=1e-10)


def test_tail_asymptotics():
    c = one_sided()
    assert abs(1e-4**0.5 * tail(c, 0, 1e-4) - 1 / 0.5) < 0.01 * 2.0
    ratio = tail(c, 0, 29.0) / tail(c, 0, 30.0)
    assert abs(ratio - math.exp(0.5)) < 1e-3


@pytest.mark.parametrize("x", [0.1, 1.0, 5.0])
def test_tail_derivative_is_density(x):
    c = LampertiCharacteristics.one_dim(1.3, beta=0.4, c_plus=1.0, c_minus=0.0)
    h = 1e-5 * x
    deriv = (tail(c, 0, x + h) - tail(c, 0, x - h)) / (2 * h)
    assert abs(-deriv / density(c, 0, x) - 1) < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 20.0), st.floats(1.01, 3.0))
def test_tail_decreasing(x, factor):
    c = LampertiCharacteristics.one_dim(0.7, beta=0.2, c_plus=1.0, c_minus=0.0)
    assert tail(c, 0, x) > tail(c, 0, x * factor)


def test_truncated_moments():
    c = one_sided()
    assert not truncated_moment(c, 2.0, "inner").divergent
    assert truncated_moment(c, 0.4, "inner").divergent
    outer = truncated_moment(c, 1.0, "outer")
    assert outer.value == pytest.approx(OUTER_P1, rel=1e-8)
    finer = truncated_moment(c, 1.0, "outer", DEFAULT_QUADRATURE.halved())
    assert abs(finer.value - outer.value) < 1e-8


@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7])
def test_inner_second_moment_finite(alpha):
    c = LampertiCharacteristics.one_dim(alpha, beta=0.5, rho=0.2)
    m = truncated_moment(c, 2.0, "inner")
    assert not m.divergent and 0 < m.value < math.inf


@pytest.mark.parametrize(
    "kw, expected",
    [
        (dict(alpha=0.5, beta=1.0, rho=1.0), 0.5),
        (dict(alpha=1.5, beta=0.0, rho=0.0), 2.5),
        (dict(alpha=0.9, beta=1.8, rho=0.0), 0.1),
    ],
)
def test_exp_moment_threshold(kw, expected):
    assert exp_moment_threshold(LampertiCharacteristics.one_dim(**kw)) == pytest.approx(expected)


def test_eta_centering():
    assert np.all(eta_centering(LampertiCharacteristics.one_dim(1.0, beta=0.3), "short_time") == 0)
    sym = LampertiCharacteristics.one_dim(1.5, beta=0.7, rho=0.7)
    assert abs(eta_centering(sym, "long_time")[0]) < 1e-12
    assert eta_centering(one_sided(), "short_time")[0] == pytest.approx(ETA_SHORT, rel=1e-9)
    with pytest.raises(DomainError):
        eta_centering(sym, "medium")


def test_structural_constants():
    c = LampertiCharacteristics.one_dim(0.6, beta=0.2, rho=0.9, c_plus=1.0, c_minus=2.0, drift=0.3)
    assert structural_constants(c).theta_tilde == pytest.approx(-0.3)
    st15 = structural_constants(LampertiCharacteristics.one_dim(1.5, beta=1.0, c_plus=1.0, c_minus=0.0))
    assert st15.theta_tilde == pytest.approx(THETA_TILDE_15, abs=1e-8)
    with pytest.raises(UnsupportedDimensionError):
        structural_constants(
            LampertiCharacteristics(1.5, (Direction((1.0, 0.0), 1.0, 0.0),), (0.0, 0.0))
        )


def test_covariance():
    c = one_sided()
    assert covariance_matrix(c)[0, 0] == pytest.approx(COV, rel=1e-8)
    sym = LampertiCharacteristics.one_dim(0.5, beta=1.0, rho=1.0)
    assert covariance_matrix(sym)[0, 0] == pytest.approx(2 * COV, rel=1e-8)


def test_covariance_two_dim_symmetric_psd():
    s = math.sqrt(0.5)
    c = LampertiCharacteristics(
        1.2,
        (
            Direction((1.0, 0.0), 1.0, 0.5),
            Direction((s, s), 0.7, 1.0),
            Direction((0.0, -1.0), 0.3, -0.5),
        ),
        (0.0, 0.0),
    )
    m = covariance_matrix(c)
    assert np.array_equal(m, m.T)
    assert np.all(np.linalg.eigvalsh(m) >= 0)


def test_halved_tolerance_stability():
    c = LampertiCharacteristics.one_dim(1.3, beta=0.4, rho=0.9, c_plus=0.5)
    a = tail(c, 1, 0.3)
    b = tail(c, 1, 0.3, DEFAULT_QUADRATURE.halved())
    assert abs(a - b) / a < 10 * DEFAULT_QUADRATURE.rel_tol
