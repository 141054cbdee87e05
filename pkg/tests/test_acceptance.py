"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the
terminal summary under "acceptance criteria".
"""

import math

import numpy as np
import pytest

from gafzeros import (
    McConfig,
    binomial_covariance,
    case_prediction,
    common_shock,
    correction_area_quad,
    correction_contour_quad,
    correction_residue,
    dn_constant,
    empirical_asymptotics,
    expected_zeros,
    general_exponent,
    ornstein_uhlenbeck,
    spectral_factorize,
    track_branches,
    two_dependent,
)
from gafzeros.extrapolation import power_law_fit
from gafzeros.kernel import oracle_correction
from gafzeros.montecarlo import empirical_expected_zeros
from gafzeros.puiseux import branch_errors, identity_checks, interior_constant

from _util import covariance_from_taps, random_taps

SWEEP = [1e-3, 1e-4, 1e-5]
FIT_SWEEP = [1e-3, 1e-4, 1e-5, 1e-6]


def test_criterion_01_baseline_identity(verdict):
    cov = two_dependent(0, 0)
    errs = [abs(expected_zeros(cov, r).total - r * r / (1 - r * r)) for r in (0.5, 0.9, 0.99)]
    assert verdict(1, max(errs) < 1e-10, f"max error {max(errs):.2e} (tol 1e-10)")


def test_criterion_02_cross_method(verdict):
    worst_rc = worst_ca = 0.0
    for ab in [(0.2, 0.05), (0.4, 0.1), (-0.3, 0.05)]:
        cov = two_dependent(*ab)
        for r in (0.5, 0.9):
            res, con, area = correction_residue(cov, r), correction_contour_quad(cov, r), correction_area_quad(cov, r)
            worst_rc = max(worst_rc, abs(res - con))
            worst_ca = max(worst_ca, abs(con - area))
    ok = worst_rc < 1e-8 and worst_ca < 1e-6
    assert verdict(2, ok, f"|res-con| {worst_rc:.1e} (<1e-8), |con-area| {worst_ca:.1e} (<1e-6)")


def test_criterion_03_oracles(verdict):
    worst = 0.0
    for model in (ornstein_uhlenbeck(0.5), common_shock(0.5)):
        for r in (0.5, 0.9, 0.95):
            worst = max(worst, abs(correction_contour_quad(model, r) - oracle_correction(model, r)))
    assert verdict(3, worst < 1e-8, f"max deviation {worst:.1e} (tol 1e-8)")


def _constant_check(label, a, b, expected):
    pred = case_prediction(a, b)
    emp = empirical_asymptotics(two_dependent(a, b), SWEEP, pred)
    rel = abs(emp.constant - expected) / expected
    return rel, emp.constant


def test_criterion_04_case_one(verdict):
    b = 0.3
    a = 2 * math.sqrt(b * (1 - 2 * b))
    expected = math.sqrt(2 * b / (6 * b - 1))
    rel, c = _constant_check(4, a, b, expected)
    assert verdict(4, rel < 0.01, f"constant {c:.6f} vs {expected:.6f}, rel {rel:.1e} (tol 1e-2)")


def test_criterion_05_case_two(verdict):
    expected = 0.5 * math.sqrt(1.4 / 2.2)
    rel, c = _constant_check(5, 0.3, -0.2, expected)
    assert verdict(5, rel < 0.01, f"constant {c:.6f} vs {expected:.6f}, rel {rel:.1e} (tol 1e-2)")


def test_criterion_06_case_three(verdict):
    emp = empirical_asymptotics(two_dependent(2 / 3, 1 / 6), FIT_SWEEP)
    expected = 2**-1.25
    rel = abs(emp.constant - expected) / expected
    ok = abs(emp.exponent - 0.75) <= 0.02 and rel < 0.01
    assert verdict(
        6, ok, f"exponent {emp.exponent:.4f} (0.75+-0.02), constant {emp.constant:.6f} vs 2^-5/4={expected:.6f}"
    )


def _binomial_three():
    cov = binomial_covariance(3)
    emp = empirical_asymptotics(cov, FIT_SWEEP)
    s = np.asarray(FIT_SWEEP)
    rel_resid = np.abs(-emp.correction * s ** (5 / 6) / dn_constant(3) - 1)
    return emp, s, rel_resid


def test_criterion_07_binomial_three(verdict):
    emp, s, rel_resid = _binomial_three()
    expected = dn_constant(3)
    rel = abs(emp.constant - expected) / expected
    rate = power_law_fit(s, rel_resid)[0]
    # the naive rate would be 1/(2n) = 1/6; cancellation lifts it to 2/(2n)
    ok = abs(emp.exponent - 5 / 6) <= 0.02 and rel < 0.02 and abs(rate - 1 / 3) < 0.05
    assert verdict(
        "7", ok,
        f"exponent {emp.exponent:.4f} (5/6+-0.02), constant {emp.constant:.6f} vs {expected:.6f} "
        f"(rel {rel:.1e}), correction rate {rate:.3f} (2/(2n)=0.333+-0.05)",
    )


@pytest.mark.xfail(strict=True, reason="a s^(1/3) correction shrinks ~2.15x per decade, not 10x")
def test_criterion_07_literal_decade_shrink(verdict):
    _, _, rel_resid = _binomial_three()
    ratios = rel_resid[:-1] / rel_resid[1:]
    ok = bool(np.all(ratios >= 10))
    verdict("7b", ok, f"residual shrink per decade {np.round(ratios, 2).tolist()} (need >= 10; unattainable)")
    assert ok


def test_criterion_08_interior_constant(verdict):
    a, b = 0.2, 0.05
    value = -correction_residue(two_dependent(a, b), 1 - 1e-6)
    closed = interior_constant(a, b)
    rel = abs(value - closed) / closed
    assert verdict(8, rel < 1e-3, f"-J={value:.10f} vs C(a,b)={closed:.10f}, rel {rel:.1e} (tol 1e-3)")


def test_criterion_09_branch_law(verdict):
    one_minus_r = np.logspace(-3, -6, 7)
    slopes = {}
    for n in (2, 3, 4):
        err = branch_errors(n, 1 - one_minus_r)
        slopes[n] = power_law_fit(one_minus_r, err)[0]
    track = track_branches(binomial_covariance(1), 1 - one_minus_r)
    r = track.r_grid
    exact = np.stack([(-1 + np.sqrt(1 - r * r)) / r, (-1 - np.sqrt(1 - r * r)) / r])
    n1 = np.max(np.min(np.abs(track.branches[:, None, :] - exact[None, :, :]), axis=1))
    ok = all(slopes[n] >= 3 / (2 * n) - 0.05 for n in slopes) and n1 < 1e-10
    detail = ", ".join(f"n={n} slope {s:.3f} (>= {3 / (2 * n) - 0.05:.3f})" for n, s in slopes.items())
    assert verdict(9, ok, f"{detail}; n=1 error {n1:.1e} (tol 1e-10)")


def test_criterion_10_identities(verdict):
    worst = max(identity_checks(n).max_residual for n in range(1, 9))
    assert verdict(10, worst < 1e-12, f"max residual {worst:.1e} over n=1..8 (tol 1e-12)")


def test_criterion_11_negativity(verdict):
    rng = np.random.default_rng(20240611)
    worst = -np.inf
    strict_fail = 0
    for i in range(50):
        n = int(rng.integers(1, 5))
        cov = covariance_from_taps(random_taps(rng, n, complex_taps=bool(i % 2)))
        nonzero = any(abs(g) > 0 for g in cov.gamma[1:])
        for r in (0.3, 0.6, 0.9):
            c = expected_zeros(cov, r).correction
            worst = max(worst, c)
            if nonzero and not c < -1e-8:
                strict_fail += 1
    ok = worst <= 1e-10 and strict_fail == 0
    assert verdict(11, ok, f"largest correction {worst:.2e} (<= 1e-10), strict violations {strict_fail}")


@pytest.mark.slow
def test_criterion_12_monte_carlo(verdict):
    parts = []
    ok = True
    for ab in [(0.0, 0.0), (2 / 3, 1 / 6)]:
        cov = two_dependent(*ab)
        rep = empirical_expected_zeros(cov, McConfig(r=0.8, trials=2000, seed=42, truncation=400))
        res = expected_zeros(cov, 0.8)
        z = (rep.mean - res.total) / rep.stderr
        ok &= abs(z) <= 3
        if ab != (0.0, 0.0):
            ok &= res.total < res.baseline
        parts.append(f"{ab}: mean {rep.mean:.4f} vs {res.total:.4f}, z={z:+.2f}")
    assert verdict(12, ok, "; ".join(parts))


def test_criterion_13_factorization(verdict):
    covs = [two_dependent(*ab) for ab in [(0, 0), (0.2, 0.05), (0.4, 0.1), (-0.3, 0.05), (0.3, -0.2), (2 / 3, 1 / 6)]]
    covs.append(two_dependent(2 * math.sqrt(0.3 * 0.4), 0.3))
    covs += [binomial_covariance(n) for n in range(1, 9)]
    rng = np.random.default_rng(7)
    covs += [covariance_from_taps(random_taps(rng, int(rng.integers(1, 5)))) for _ in range(10)]
    worst_rt = max(spectral_factorize(c).round_trip_residual(c) for c in covs)
    worst_tap = 0.0
    for n in range(1, 9):
        ref = np.array([math.comb(n, j) for j in range(n + 1)]) / math.sqrt(math.comb(2 * n, n))
        worst_tap = max(worst_tap, np.max(np.abs(spectral_factorize(binomial_covariance(n)).taps - ref)))
    ok = worst_rt < 1e-10 and worst_tap < 1e-12
    assert verdict(13, ok, f"round trip {worst_rt:.1e} (<1e-10), binomial taps {worst_tap:.1e} (<1e-12)")
