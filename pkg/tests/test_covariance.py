import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gafzeros import (
    Covariance,
    DomainError,
    NotPositiveDefinite,
    RegionLabel,
    ValidationError,
    binomial_covariance,
    check_positive_definite,
    classify_region,
    from_gamma,
    in_region,
    spectral_factorize,
    spectral_poly,
    two_dependent,
)

from _util import covariance_from_taps, random_taps


def test_two_dependent_iid_is_interior():
    cov = two_dependent(0, 0)
    assert cov.gamma == (1, 0, 0)
    assert classify_region(0, 0) is RegionLabel.INTERIOR


def test_corner_is_valid_and_degenerate():
    two_dependent(2 / 3, 1 / 6)
    assert classify_region(2 / 3, 1 / 6) is RegionLabel.CORNER_DEGENERATE
    assert classify_region(-2 / 3, 1 / 6) is RegionLabel.CORNER_DEGENERATE


def test_outside_point_rejected():
    with pytest.raises(NotPositiveDefinite):
        two_dependent(0.7, 0.5)
    assert classify_region(0.7, 0.5) is RegionLabel.OUTSIDE


def test_ellipse_boundary_label():
    b = 0.3
    assert classify_region(2 * math.sqrt(b * (1 - 2 * b)), b) is RegionLabel.BOUNDARY_ELLIPSE


def test_line_boundary_label():
    assert classify_region(0.3, -0.2) is RegionLabel.BOUNDARY_LINE
    assert classify_region(-0.3, -0.2) is RegionLabel.BOUNDARY_LINE


@settings(max_examples=300, deadline=None)
@given(st.floats(-1.2, 1.2), st.floats(-0.7, 0.7))
def test_region_matches_spectral_minimum(a, b):
    # independent oracle: min over theta of 1 + 2a cos(t) + 2b cos(2t)
    theta = np.linspace(0, np.pi, 20001)
    low = np.min(1 + 2 * a * np.cos(theta) + 2 * b * np.cos(2 * theta))
    if abs(low) < 1e-3:
        return  # too close to the boundary for a grid oracle
    assert in_region(a, b) == (low > 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_binomial_last_lag(n):
    cov = binomial_covariance(n)
    assert cov.gamma[-1] == pytest.approx(1 / math.comb(2 * n, n), abs=1e-15)
    assert cov.gamma[0] == 1


def test_binomial_small_cases():
    assert binomial_covariance(1).gamma == (1, 0.5)
    g = binomial_covariance(2).gamma
    assert g[1] == pytest.approx(2 / 3, abs=1e-15) and g[2] == pytest.approx(1 / 6, abs=1e-15)


def test_gamma0_must_be_one():
    with pytest.raises(ValidationError):
        Covariance((0.9, 0.1))
    with pytest.raises(NotPositiveDefinite):
        from_gamma([1, 0.9, 0.9])


def test_lag_is_hermitian():
    cov = Covariance((1, 0.2 + 0.1j))
    assert cov.lag(-1) == 0.2 - 0.1j
    assert cov.lag(5) == 0


def test_json_round_trip():
    cov = Covariance((1, 0.2 + 0.1j, -0.05))
    assert Covariance.from_json(cov.to_json()) == cov
    with pytest.raises(ValidationError):
        Covariance.from_json('{"n": 3, "gamma": [[1, 0]]}')


def test_spectral_poly_two_dependent():
    a, b, r = 0.3, 0.1, 0.7
    sp = spectral_poly(two_dependent(a, b), r)
    np.testing.assert_allclose(sp.coeffs, [b * r**2, a * r, 1, a * r, b * r**2], atol=1e-16)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_binomial_lift_at_one(n):
    lift = spectral_poly(binomial_covariance(n), 1.0).lift
    ref = np.array([math.comb(2 * n, k) for k in range(2 * n + 1)]) / math.comb(2 * n, n)
    np.testing.assert_allclose(lift.real, ref, atol=1e-15)


def test_iid_theta_is_one():
    sp = spectral_poly(two_dependent(0, 0), 0.6)
    np.testing.assert_allclose(sp(np.exp(1j * np.linspace(0, 6, 7))), 1.0)


def test_spectral_poly_domain():
    with pytest.raises(DomainError):
        spectral_poly(two_dependent(0, 0), 1.5)
    with pytest.raises(DomainError):
        spectral_poly(two_dependent(0, 0), 0.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.floats(0.05, 0.99))
def test_theta_real_and_positive_on_circle(n, seed, r):
    cov = covariance_from_taps(random_taps(np.random.default_rng(seed), n))
    sp = spectral_poly(cov, r)
    theta = np.linspace(0, 2 * np.pi, 257)
    vals = sp(np.exp(1j * theta))
    assert np.max(np.abs(vals.imag)) < 1e-12
    assert np.min(vals.real) > 0
    np.testing.assert_allclose(sp.on_circle(theta), vals.real, atol=1e-12)


@pytest.mark.parametrize("n", range(1, 9))
def test_binomial_taps(n):
    taps = spectral_factorize(binomial_covariance(n)).taps
    ref = np.array([math.comb(n, j) for j in range(n + 1)]) / math.sqrt(math.comb(2 * n, n))
    np.testing.assert_allclose(taps, ref, atol=1e-12)


def test_iid_taps():
    np.testing.assert_array_equal(spectral_factorize(two_dependent(0, 0)).taps, [1])


@pytest.mark.parametrize(
    "ab", [(0.2, 0.05), (0.4, 0.1), (-0.3, 0.05), (2 / 3, 1 / 6), (0.3, -0.2)]
)
def test_two_dependent_round_trip(ab):
    cov = two_dependent(*ab)
    filt = spectral_factorize(cov)
    assert filt.round_trip_residual(cov) < 1e-10
    assert np.sum(np.abs(filt.taps) ** 2) == pytest.approx(1.0, abs=1e-14)


def test_ellipse_boundary_round_trip():
    b = 0.3
    cov = two_dependent(2 * math.sqrt(b * (1 - 2 * b)), b)
    assert spectral_factorize(cov).round_trip_residual(cov) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.booleans())
def test_random_round_trip(n, seed, complex_taps):
    cov = covariance_from_taps(random_taps(np.random.default_rng(seed), n, complex_taps))
    assert spectral_factorize(cov).round_trip_residual(cov) < 1e-10


def test_psd_check_returns_minimum():
    assert check_positive_definite(two_dependent(0, 0)) == pytest.approx(1.0)
    assert check_positive_definite(binomial_covariance(2)) == pytest.approx(0.0, abs=1e-12)
