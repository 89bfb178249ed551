import math

import numpy as np
import pytest

from lamperti.errors import DomainError
from lamperti.limits import (
    DEFAULT_LAMBDA_GRID,
    ecf,
    long_time_test,
    short_time_centering,
    short_time_test,
    spitzer_study,
    stable_calibration,
    stable_exponent,
)
from lamperti.measure import LampertiCharacteristics


def test_ecf_of_point_mass():
    lam = np.array([-1.0, 0.0, 2.0])
    np.testing.assert_allclose(ecf([0.5], lam), np.exp(1j * lam * 0.5))
    assert ecf([1.0, -1.0], [0.0])[0] == 1.0


def test_ecf_of_gaussian_sample():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(100_000)
    lam = np.asarray(DEFAULT_LAMBDA_GRID)
    assert np.max(np.abs(ecf(x, lam) - np.exp(-0.5 * lam**2))) < 0.01


def test_ecf_rejects_empty():
    with pytest.raises(DomainError):
        ecf([], [1.0])


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_stable_exponent_symmetric_is_real_power(alpha):
    # symmetric stable: Psi = 2 sigma |lam|^alpha int_0^inf (1 - cos u) u^{-alpha-1} du
    chars = LampertiCharacteristics.one_dim(alpha, beta=0.3, rho=0.3)
    const = 2 * math.gamma(1 - alpha) * math.cos(math.pi * alpha / 2) / alpha if alpha != 1.0 else math.pi
    for lam in (0.5, 2.0):
        for comp in ("unit", "limit"):
            val = stable_exponent(chars, lam, comp)
            assert val.real == pytest.approx(const * lam**alpha, rel=1e-7)
            assert abs(val.imag) < 1e-8
    assert stable_exponent(chars, 0.0) == 0.0
    with pytest.raises(DomainError):
        stable_exponent(chars, 1.0, "other")


def test_short_time_centering_symmetric_at_one_vanishes():
    chars = LampertiCharacteristics.one_dim(1.0, beta=0.7, rho=0.7)
    assert abs(short_time_centering(chars, 0.01)) < 1e-10


def test_short_time_centering_log_term_at_one():
    chars = LampertiCharacteristics.one_dim(1.0, beta=0.7, rho=0.2, c_plus=2.0, c_minus=1.0)
    diff = short_time_centering(chars, 0.01) - short_time_centering(chars, 1.0)
    assert diff == pytest.approx(math.log(0.01), rel=1e-12)


def test_stable_calibration_within_monte_carlo_error():
    chars = LampertiCharacteristics.one_dim(1.5, beta=1.0, rho=1.0)
    n = 4000
    rep = stable_calibration(chars, n, seed=1, n_terms=2000)
    assert rep.n_samples == n
    assert rep.sup_distance < 4 / math.sqrt(n)


def test_short_time_distance_shrinks():
    chars = LampertiCharacteristics.one_dim(0.5, beta=1.0, rho=1.0)
    reps = short_time_test(chars, [1.0, 0.01], 3000, seed=2, n_terms=2000)
    assert [r.h for r in reps] == [1.0, 0.01]
    assert reps[1].sup_distance < reps[0].sup_distance
    assert reps[1].sup_distance < 0.08


def test_long_time_report_shape_and_accuracy():
    chars = LampertiCharacteristics.one_dim(0.5, beta=1.0, rho=1.0)
    reps = long_time_test(chars, [20], 2000, seed=3, terms_per_unit=50)
    rep = reps[0]
    assert rep.h == 20.0 and rep.n_samples == 2000
    assert rep.sup_distance < 0.1
    d = rep.to_dict()
    assert len(d["empirical"]) == len(DEFAULT_LAMBDA_GRID)
    with pytest.raises(DomainError):
        long_time_test(chars, [2.5], 10, seed=0)


def test_spitzer_study_fields():
    chars = LampertiCharacteristics.one_dim(1.5, beta=1.0, rho=1.0)
    t = np.linspace(0.0, 2.0, 11)
    study = spitzer_study(chars, t, 200, seed=4, n_terms=500)
    assert len(study.positive_fraction) == 11
    assert study.positive_fraction[0] == 1.0
    assert 0.0 <= study.estimate <= 1.0 and study.std_error > 0
    with pytest.raises(DomainError):
        spitzer_study(chars, [0.5, 1.0], 10, seed=0)
