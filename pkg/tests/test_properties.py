import math

import pytest

from lamperti import properties
from lamperti.errors import DomainError
from lamperti.exponents import laplace_spectrally_negative
from lamperti.measure import LampertiCharacteristics
from lamperti.properties import (
    OSCILLATES,
    TO_MINUS,
    TO_PLUS,
    classify,
    cramer_root,
    drift_classification,
    drift_function,
    find_rho_zero,
    has_increase_times,
    increase_times_tail_integral,
    zero_theta_tilde,
)

# mpmath findroot on Gamma(-a) d/dl (l+1-rho)_a at l=0 (30 digits).
RHO0_ALPHA15 = 1.5824619385162233
# mpmath findroot of the theta~=0 Laplace exponent at rho = rho0 + 0.2.
CRAMER_ALPHA15 = 0.43019980124215348


def spec_neg(rho, alpha=1.5):
    return zero_theta_tilde(LampertiCharacteristics.one_dim(alpha, rho=rho, c_plus=0.0, c_minus=1.0))


def test_classify_infinite_variation():
    r = classify(LampertiCharacteristics.one_dim(1.5, beta=0.2, rho=0.9))
    assert r.variation == "infinite" and r.creeps_up == "no" and r.jurek
    assert r.p_threshold == 1.5


@pytest.mark.parametrize("f, expected", [(1.0, True), (1.05, False), (0.2, True)])
def test_selfdecomposable_boundary(f, expected):
    assert classify(LampertiCharacteristics.one_dim(0.5, beta=f, rho=f)).selfdecomposable is expected


def test_creeping_and_regularity_with_drift():
    pos = classify(LampertiCharacteristics.one_dim(0.5, beta=0.2, c_minus=0.0, drift=0.3))
    assert pos.variation == "finite" and pos.creeps_up == "yes" and pos.zero_regular_upward == "yes"
    neg = classify(LampertiCharacteristics.one_dim(0.5, beta=0.2, c_minus=0.0, drift=-0.3))
    assert neg.creeps_up == "undetermined"
    assert classify(LampertiCharacteristics.one_dim(1.0)).creeps_up == "undetermined"


def test_tail_class_delta():
    assert classify(LampertiCharacteristics.one_dim(0.7, beta=0.4)).tail_class_delta == pytest.approx(1.3)


def test_rho_zero_fixture():
    rho0 = find_rho_zero(1.5)
    assert 1 < rho0 < 2
    assert abs(drift_function(1.5, rho0)) < 1e-12
    assert rho0 == pytest.approx(RHO0_ALPHA15, abs=1e-12)


def test_drift_function_signs():
    # g decreases through its root: g(1) > 0 > g(2).
    assert drift_function(1.5, 1.0) > 0 > drift_function(1.5, 2.0)
    assert drift_function(1.5, 1.0) == pytest.approx(math.gamma(-1.5) * math.gamma(1.5))


def test_classification_flips():
    rho0 = find_rho_zero(1.5)
    assert drift_classification(spec_neg(rho0 - 0.1))[0] == TO_PLUS
    assert drift_classification(spec_neg(rho0))[0] == OSCILLATES
    assert drift_classification(spec_neg(rho0 + 0.1))[0] == TO_MINUS


def test_drift_classification_preconditions():
    with pytest.raises(DomainError, match="theta"):
        drift_classification(LampertiCharacteristics.one_dim(1.5, rho=1.2, c_plus=0.0))
    with pytest.raises(DomainError):
        drift_classification(LampertiCharacteristics.one_dim(1.5, rho=1.2))


def test_cramer_root():
    chars = spec_neg(find_rho_zero(1.5) + 0.2)
    root = cramer_root(chars)
    assert root > 0
    assert abs(laplace_spectrally_negative(chars, root, theta_tilde=0.0)) < 1e-9
    assert root == pytest.approx(CRAMER_ALPHA15, abs=1e-9)
    with pytest.raises(DomainError):
        cramer_root(spec_neg(1.2))


@pytest.mark.parametrize("alpha", [1.5, 1.9])
def test_increase_times(alpha):
    assert has_increase_times(spec_neg(1.0, alpha))


def test_increase_times_tail_integral_against_power_bound():
    chars = LampertiCharacteristics.one_dim(1.5, rho=1.0, c_plus=0.0, c_minus=1.0)
    # corrections are relative order lam^{1-alpha}, about 1% from lam = 1e4 on
    lo, hi = 1e4, 1e8
    val = increase_times_tail_integral(chars, lo, hi)
    # Phi ~ c- Gamma(-alpha) lam^alpha, so the integral ~ Gamma(-alpha) [lam^{alpha-2}/(alpha-2)]_lo^hi
    approx = math.gamma(-1.5) * (hi ** -0.5 - lo ** -0.5) / -0.5
    assert abs(val / approx - 1) < 0.02


def test_classify_reports_drift_for_zero_theta_tilde():
    r = classify(spec_neg(find_rho_zero(1.5) + 0.2))
    assert r.drift == TO_MINUS and r.cramer_root == pytest.approx(CRAMER_ALPHA15, abs=1e-9)
    assert r.has_increase_times
    assert set(r.to_dict()) >= {"variation", "drift", "rho_zero"}
