import io
import json
import math

import numpy as np
import pytest
from scipy import stats

from permconc import exchange as ex
from permconc.arrays import make_constant, make_uniform_random
from permconc.montecarlo import (
    BLOCK,
    clopper_pearson,
    estimate_pair_moments,
    estimate_tail,
)
from permconc.oracle import all_permutations, exact_distribution, exact_tails
from permconc.statistics import mean_t2


@pytest.mark.parametrize("hits", [0, 1, 7, 500, 999, 1000])
def test_clopper_pearson_matches_binomtest(hits):
    lo, hi = clopper_pearson(np.array([hits]), 1000)
    ref = stats.binomtest(hits, 1000).proportion_ci(confidence_level=0.99, method="exact")
    assert lo[0] == pytest.approx(ref.low, abs=1e-12)
    assert hi[0] == pytest.approx(ref.high, abs=1e-12)


def test_constant_array():
    a = make_constant(6, 0.5, 3)
    est = estimate_tail(a, "t2", [0.0, 0.5, 1.0], 5000, seed=1)
    assert est.point.tolist() == [1.0, 0.0, 0.0]
    assert est.ci_high[1] < 2e-3
    assert est.ci_low[0] > 0.99


def test_invariants():
    a = make_uniform_random(8, 2, 3)
    est = estimate_tail(a, "t1", np.arange(0, 12, 0.5), 20_000, seed=3)
    assert np.all(est.ci_low <= est.point) and np.all(est.point <= est.ci_high)
    assert np.all(np.diff(est.point) <= 0)
    assert est.center == pytest.approx(a.values.sum() / 8)


def test_grid_validation():
    a = make_uniform_random(4, 2, 3)
    with pytest.raises(ValueError):
        estimate_tail(a, "t1", [1.0, 0.5], 10, seed=0)
    with pytest.raises(ValueError):
        estimate_tail(a, "t1", [-1.0], 10, seed=0)
    with pytest.raises(ValueError):
        estimate_tail(a, "t3", [1.0], 10, seed=0)
    with pytest.raises(ValueError):
        estimate_tail(a, "t9", [1.0], 10, seed=0)


def test_thread_count_does_not_change_result():
    a = make_uniform_random(10, 5, 3)
    samples = 3 * BLOCK + 17
    ref = estimate_tail(a, "t2", np.arange(0, 4, 0.25), samples, seed=9, threads=1)
    for threads in (2, 4, 8):
        got = estimate_tail(a, "t2", np.arange(0, 4, 0.25), samples, seed=9, threads=threads)
        assert np.array_equal(got.hits, ref.hits)
        assert got.to_csv() == ref.to_csv()


def test_serialisation():
    a = make_uniform_random(5, 5, 2)
    est = estimate_tail(a, "t3", [0.0, 0.5, 1.0], 1000, seed=4)
    text = est.to_csv()
    first, header = text.splitlines()[:2]
    assert first.startswith("# ")
    meta = json.loads(first[2:])
    assert meta == {"seed": 4, "samples": 1000, "center": est.center}
    assert header == "t,point,ci_low,ci_high"
    assert len(text.splitlines()) == 2 + 3
    doc = est.to_json()
    assert doc["meta"]["samples"] == 1000 and len(doc["rows"]) == 3


def test_t2_tails_match_oracle():
    a = make_uniform_random(5, 15, 3)
    grid = np.arange(0, 2.6, 0.125)
    est = estimate_tail(a, "t2", grid, 10**6, seed=15)
    exact = np.array([float(x) for x in exact_tails(exact_distribution(a, "t2"), mean_t2(a), grid)])
    misses = int(np.sum((exact < est.ci_low) | (exact > est.ci_high)))
    assert misses <= math.ceil(grid.size / 100)


def test_pair_moments_constant():
    pm = estimate_pair_moments(make_constant(7, 0.3, 3), "t2", 2000, seed=1)
    assert pm.mean_abs_delta == pytest.approx(0, abs=1e-12)
    assert pm.mean_delta_sq == pytest.approx(0, abs=1e-12)
    assert pm.drift_by_state_summary[0] == pytest.approx(0, abs=1e-12)


def test_pair_moments_t1_against_exact_population():
    n = 6
    a = make_uniform_random(n, 44, 3)
    perms = all_permutations(n)
    d = np.array([ex.t1_deltas(a, p) for p in perms])
    exact_abs, exact_sq = np.abs(d).mean(), (d * d).mean()
    pm = estimate_pair_moments(a, "t1", 200_000, seed=2)
    assert abs(pm.mean_abs_delta - exact_abs) <= 4 * pm.se_abs_delta
    assert abs(pm.mean_delta_sq - exact_sq) <= 4 * pm.se_delta_sq
    assert abs(pm.mean_delta) <= 4 * pm.se_delta


def test_pair_moments_t2_against_exact_population():
    n = 4
    a = make_uniform_random(n, 45, 3)
    perms = all_permutations(n)
    d = np.array([ex.t2_deltas(a, s, p) for s in perms for p in perms])
    pm = estimate_pair_moments(a, "t2", 200_000, seed=3)
    assert abs(pm.mean_abs_delta - np.abs(d).mean()) <= 4 * pm.se_abs_delta
    assert abs(pm.mean_delta_sq - (d * d).mean()) <= 4 * pm.se_delta_sq


def test_pair_moments_n50():
    a = make_uniform_random(50, 50, 3)
    t1m = estimate_pair_moments(a, "t1", 100_000, seed=4)
    assert abs(t1m.drift_mean) <= 4 * t1m.drift_se
    assert t1m.mean_delta_sq <= t1m.bound_sq
    t2m = estimate_pair_moments(a, "t2", 100_000, seed=5)
    assert abs(t2m.drift_mean) <= 4 * t2m.drift_se
    mu = mean_t2(a)
    paper_avg = 3 / 50 * mu + 3 * 50 * mu / (49 * 48)
    assert t2m.mean_abs_delta <= paper_avg + 4 * t2m.se_abs_delta
    assert t2m.mean_abs_delta <= t2m.bound_abs
    assert t2m.mean_delta_sq <= t2m.bound_sq
