"""Tests for the Monte Carlo verification module.

Statistical assertions use 3-standard-error tolerances or constructions
where common-random-number coupling makes the comparison exact.
"""

import math

import numpy as np
import pytest

from lsemix.distributions import LseDistribution
from lsemix.empirical import (
    DEFAULT_GRID_SIZE,
    DominanceResult,
    McConfig,
    SurvivalCurve,
    empirical_survival,
    stop_loss,
    verify_cx,
    verify_icx,
    verify_orthant,
    verify_st,
)
from lsemix.errors import UsageError
from lsemix.generators import DensityGenerator, GeneratorFamily
from lsemix.mixing import AlphaBetaMap, BetaLambdaOne, Degenerate
from lsemix.orders import Verdict, check_icx, check_st

NORMAL = DensityGenerator(GeneratorFamily.NORMAL)


def mk(mu, sigma, delta=None, ab=None, mix=None):
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    n = mu.size
    if delta is None:
        delta = np.zeros(n)
    return LseDistribution(mu, np.asarray(sigma, float).reshape(n, n),
                           np.atleast_1d(np.asarray(delta, float)),
                           NORMAL, ab or AlphaBetaMap.plain(),
                           mix or Degenerate(1.0))


def ghss(mu, sigma, delta, lam=3.0):
    return mk(mu, sigma, delta, ab=AlphaBetaMap.skew_slash(),
              mix=BetaLambdaOne(lam))


CFG = McConfig(sample_count=100_000, seed=20240817)


# --- configuration validation ---------------------------------------------------


def test_config_rejects_small_sample_count():
    with pytest.raises(UsageError):
        McConfig(sample_count=5_000, seed=1)


def test_config_rejects_bad_grids():
    with pytest.raises(UsageError):
        McConfig(sample_count=10_000, seed=1, grid=())
    with pytest.raises(UsageError):
        McConfig(sample_count=10_000, seed=1, grid=(1.0, 0.5))
    with pytest.raises(UsageError):
        McConfig(sample_count=10_000, seed=1, grid=(0.0, float("nan")))


def test_config_rejects_bad_multiplier():
    with pytest.raises(UsageError):
        McConfig(sample_count=10_000, seed=1, confidence_multiplier=0.0)


# --- raw estimators ---------------------------------------------------------------


def test_survival_constant_draws():
    rows = empirical_survival(np.full(100, 5.0), [0.0])
    assert rows == [(0.0, 1.0, 0.0)]


def test_survival_extreme_grid_points():
    x = np.array([1.0, 2.0, 3.0])
    rows = empirical_survival(x, [0.5, 3.5])
    assert rows[0][1] == 1.0
    assert rows[1][1] == 0.0


def test_survival_standard_normal_half():
    rng = np.random.default_rng(3)
    x = rng.normal(size=100_000)
    t, p, se = empirical_survival(x, [0.0])[0]
    assert abs(p - 0.5) <= 3 * se


def test_survival_binomial_standard_error():
    x = np.array([0.0, 1.0, 2.0, 3.0])
    _, p, se = empirical_survival(x, [1.5])[0]
    assert p == 0.5
    assert se == pytest.approx(math.sqrt(0.25 / 4))


def test_stop_loss_far_left_threshold():
    rng = np.random.default_rng(4)
    x = rng.normal(size=10_000)
    t = x.min() - 10.0
    est, _ = stop_loss(x, t)
    assert est == pytest.approx(x.mean() - t, rel=1e-12)


def test_stop_loss_above_max():
    x = np.array([1.0, 2.0])
    assert stop_loss(x, 5.0) == (0.0, 0.0)


def test_stop_loss_standard_normal_at_zero():
    rng = np.random.default_rng(5)
    x = rng.normal(size=1_000_000)
    est, se = stop_loss(x, 0.0)
    assert abs(est - 1.0 / math.sqrt(2.0 * math.pi)) <= 3 * se


def test_estimators_reject_bad_samples():
    with pytest.raises(UsageError):
        empirical_survival([], [0.0])
    with pytest.raises(UsageError):
        stop_loss([1.0, float("inf")], 0.0)


# --- survival dominance ------------------------------------------------------------


def test_verify_st_identical_pair_passes():
    d = mk(0.3, [[1.7]])
    r = verify_st(d, d, CFG)
    assert r.passed
    # coupling makes the samples identical, so the difference is exactly zero
    assert r.max_violation == 0.0
    assert r.violation_point is None


def test_verify_st_location_ordered_pair_passes():
    r = verify_st(ghss(0.0, [[1.0]], [0.2]), ghss(0.3, [[1.0]], [0.5]), CFG)
    assert r.passed
    assert isinstance(r.curve, SurvivalCurve)
    assert r.curve.t.size == DEFAULT_GRID_SIZE


def test_verify_st_scale_mismatch_fails_in_tail():
    r = verify_st(mk(0.0, [[2.0]]), mk(0.0, [[1.0]]), CFG)
    assert not r.passed
    assert r.violation_point is not None
    assert r.max_violation > 3 * r.standard_error_at_violation
    # the survival functions cross; the wide distribution exceeds in a tail
    assert abs(r.violation_point) > 0.3


def test_verify_st_curve_is_consistent():
    r = verify_st(mk(0.0, [[1.0]]), mk(0.2, [[1.0]]), CFG)
    c = r.curve
    assert np.all(np.diff(c.t) > 0)
    assert np.all((c.survival_1 >= 0) & (c.survival_1 <= 1))
    assert np.all(np.diff(c.survival_1) <= 0)  # survival is nonincreasing
    assert np.all(c.stoploss_1 >= 0)
    assert np.all(np.diff(c.stoploss_1) <= 1e-12)
    with pytest.raises(ValueError):
        c.survival_1[0] = 2.0  # read-only


def test_verify_st_requires_univariate():
    d = mk([0.0, 0.0], np.eye(2))
    with pytest.raises(UsageError):
        verify_st(d, d, CFG)


def test_verify_st_explicit_grid_respected():
    cfg = McConfig(sample_count=20_000, seed=9, grid=(-1.0, 0.0, 1.0))
    r = verify_st(mk(0.0, [[1.0]]), mk(0.1, [[1.0]]), cfg)
    assert np.array_equal(r.curve.t, [-1.0, 0.0, 1.0])


def test_single_point_grid_never_confirms():
    # a genuine violation flagged at one isolated point is suppressed by the
    # adjacency rule; the excursion is still reported
    cfg = McConfig(sample_count=50_000, seed=11, grid=(2.5,))
    r = verify_st(mk(0.0, [[4.0]]), mk(0.0, [[1.0]]), cfg)
    assert r.passed
    assert r.max_violation > 3 * r.standard_error_at_violation


# --- stop-loss dominance -------------------------------------------------------------


def test_verify_icx_identical_pair_passes():
    d = ghss(0.0, [[1.0]], [0.4])
    r = verify_icx(d, d, CFG)
    assert r.passed and r.max_violation == 0.0


def test_verify_icx_dilation_passes():
    r = verify_icx(mk(0.0, [[1.0]]), mk(0.3, [[2.0]]), CFG)
    assert r.passed


def test_verify_icx_scale_shrink_fails_at_large_t():
    r = verify_icx(mk(0.0, [[2.0]]), mk(0.3, [[1.0]]), CFG)
    assert not r.passed
    assert r.violation_point is not None
    assert r.violation_point > 0.3  # violation surfaces in the upper tail


# --- convex functionals ---------------------------------------------------------------


DIRS2 = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]]


def test_verify_cx_identical_pair_passes():
    d = mk([0.0, 0.0], np.array([[1.0, 0.3], [0.3, 1.0]]))
    r = verify_cx(d, d, CFG, DIRS2)
    assert r.passed and r.max_violation == 0.0
    assert r.curve is None


def test_verify_cx_psd_growth_passes():
    d1 = mk([0.0, 0.0], np.eye(2))
    d2 = mk([0.0, 0.0], np.eye(2) + 0.5 * np.ones((2, 2)))
    assert verify_cx(d1, d2, CFG, DIRS2).passed


def test_verify_cx_mean_shift_fails():
    d1 = mk([0.0, 0.0], np.eye(2))
    d2 = mk([0.3, 0.0], np.eye(2))
    r = verify_cx(d1, d2, CFG, DIRS2)
    assert not r.passed
    assert r.max_violation == pytest.approx(0.3, abs=0.05)


def test_verify_cx_detects_reversed_psd():
    d1 = mk([0.0, 0.0], np.eye(2) + 0.5 * np.ones((2, 2)))
    d2 = mk([0.0, 0.0], np.eye(2))
    assert not verify_cx(d1, d2, CFG, DIRS2).passed


def test_verify_cx_validates_directions():
    d = mk([0.0, 0.0], np.eye(2))
    with pytest.raises(UsageError):
        verify_cx(d, d, CFG, [[1.0, 0.0, 0.0]])
    with pytest.raises(UsageError):
        verify_cx(d, d, CFG, [[0.0, 0.0]])
    with pytest.raises(UsageError):
        verify_cx(d, d, CFG, np.zeros((0, 2)))


# --- orthant probabilities --------------------------------------------------------------


def corr(rho):
    return np.array([[1.0, rho], [rho, 1.0]])


CORNERS = [[0.0, 0.0], [0.5, 0.5], [-0.5, 1.0], [1.0, -1.0]]


def test_verify_orthant_identical_pair_passes():
    d = mk([0.0, 0.0], corr(0.4))
    r = verify_orthant(d, d, CFG, CORNERS)
    assert r.passed and r.max_violation == 0.0


def test_verify_orthant_correlation_increase_passes():
    r = verify_orthant(mk([0.0, 0.0], corr(0.2)), mk([0.0, 0.0], corr(0.6)),
                       CFG, CORNERS)
    assert r.passed


def test_verify_orthant_reversed_fails_at_origin():
    r = verify_orthant(mk([0.0, 0.0], corr(0.6)), mk([0.0, 0.0], corr(0.2)),
                       CFG, [[0.0, 0.0]])
    assert not r.passed
    assert r.violation_point == (0.0, 0.0)


def test_verify_orthant_validates_corners():
    d = mk([0.0, 0.0], np.eye(2))
    with pytest.raises(UsageError):
        verify_orthant(d, d, CFG, [[0.0, 0.0, 0.0]])


# --- determinism and calibration ------------------------------------------------------


def test_bit_identical_reruns():
    d1, d2 = mk(0.0, [[1.0]]), mk(0.2, [[1.5]])
    a = verify_st(d1, d2, CFG)
    b = verify_st(d1, d2, CFG)
    assert a.passed == b.passed
    assert a.max_violation == b.max_violation
    for name in ("t", "survival_1", "survival_2", "se_1", "se_2",
                 "stoploss_1", "stoploss_2"):
        assert np.array_equal(getattr(a.curve, name), getattr(b.curve, name))


def test_chunking_does_not_depend_on_remainder():
    # an uneven sample count exercises the short final chunk
    cfg = McConfig(sample_count=10_001, seed=3, chunk_size=4_000)
    r = verify_st(mk(0.0, [[1.0]]), mk(0.5, [[1.0]]), cfg)
    assert r.passed


def test_calibration_no_false_failures_under_coupling():
    # coupled streams make d1 = d2 draws identical, so across 100 seeds the
    # false-failure rate is exactly zero (spec allows up to 5%)
    d = mk(0.1, [[2.0]])
    failures = 0
    for seed in range(100):
        cfg = McConfig(sample_count=10_000, seed=seed, chunk_size=10_000)
        if not verify_st(d, d, cfg).passed:
            failures += 1
    assert failures == 0


def test_agreement_with_analytic_verdicts():
    pairs = [
        (mk(0.0, [[1.0]]), mk(0.4, [[1.0]])),
        (ghss(0.0, [[1.0]], [0.1]), ghss(0.2, [[1.0]], [0.3])),
    ]
    for d1, d2 in pairs:
        assert check_st(d1, d2).verdict is Verdict.ORDERED
        assert verify_st(d1, d2, CFG).passed
    icx_pairs = [
        (mk(0.0, [[1.0]]), mk(0.2, [[1.8]])),
        (ghss(0.0, [[1.0]], [0.1]), ghss(0.1, [[1.5]], [0.1])),
    ]
    for d1, d2 in icx_pairs:
        assert check_icx(d1, d2).verdict is Verdict.ORDERED
        assert verify_icx(d1, d2, CFG).passed


def test_result_fields_match_types():
    r = verify_st(mk(0.0, [[1.0]]), mk(0.1, [[1.0]]), CFG)
    assert isinstance(r, DominanceResult)
    assert isinstance(r.passed, bool)
    assert isinstance(r.max_violation, float)
    assert isinstance(r.standard_error_at_violation, float)
