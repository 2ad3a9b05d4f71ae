import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from permconc import exchange as ex
from permconc.bounds import (
    BoundSpec,
    bernstein_lemma,
    bound_curve,
    bound_t1,
    bound_t2,
    bound_t3,
    log_bernstein_lemma,
    sweep_t1,
    t2_bound_threshold,
)

pos = st.floats(0.01, 1e3)


def test_lemma_at_zero_and_errors():
    assert bernstein_lemma(0.0, 1.0, 1.0) == 1.0
    assert bernstein_lemma(0.0, 0.0, 0.0) == 1.0
    with pytest.raises(ValueError):
        bernstein_lemma(-1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        bernstein_lemma(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        bernstein_lemma(1.0, 0.0, 0.0)


@given(st.floats(0.0, 50.0), st.floats(0.0, 20.0))
def test_t3_is_lemma_with_b1(t, m):
    assert bound_t3(t, m) == bernstein_lemma(t, 1.0, 2 * m)
    if t > 0:
        expected = min(1.0, 2 * math.exp(-(t * t) / (4 * m + 2 * t)))
        assert bound_t3(t, m) == pytest.approx(expected, rel=1e-12)


def test_t3_zero_mean():
    for t in (0.5, 3.0, 10.0):
        assert bound_t3(t, 0.0) == pytest.approx(min(1.0, 2 * math.exp(-t / 2)))


def test_t3_footrule_example():
    b = bound_t3(0.5, 4 / 3)
    assert 2 * math.exp(-0.25 / (16 / 3 + 1)) > 1
    assert b == 1.0


def test_t3_eventually_below_one():
    for n in (3, 10, 50):
        assert bound_t3(2 * n, n) < 1


@given(pos, pos, st.floats(0.0, 1e3))
def test_lemma_monotone(t, B, C):
    log_b = log_bernstein_lemma(t, B, C)
    assert -math.inf < log_b <= 0
    assert 0 <= bernstein_lemma(t, B, C) <= 1
    assert bernstein_lemma(t * 1.5, B, C) <= bernstein_lemma(t, B, C)


def test_strictly_decreasing_beyond_clamp():
    ts = np.linspace(5, 40, 50)
    vals = [bernstein_lemma(t, 1.0, 2.0) for t in ts]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_t1_formula():
    n, m = 6, 10.0
    for t in (0.0, 5.0, 40.0, 200.0):
        expected = 1.0 if t == 0 else min(1.0, 2 * math.exp(-t * t / (2 * n * (2 * m + t))))
        assert bound_t1(t, n, m) == pytest.approx(expected, rel=1e-12)


def test_t2_nominal():
    for t in (0.0, 1.0, 3.0):
        assert bound_t2(t, 5, 2.0) == 1.0
    t, m = 20.0, 2.0
    expected = 2 * math.exp(-(t - 3) ** 2 / (12 * m + 18 + 6 * (t - 3)))
    assert bound_t2(t, 5, m) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        bound_t2(5.0, 2, 1.0)


def test_t2_finite_n():
    n, m = 10, 4.0
    thr = t2_bound_threshold(n, m, "finite_n")
    assert thr == ex.sandwich_width(n, m)
    assert bound_t2(thr, n, m, "finite_n") == 1.0
    s = 40.0 - thr
    b = 3 + ex.envelope_eps(n)
    expected = 2 * math.exp(-s * s / (2 * b * (2 * m + b) + 2 * b * s))
    assert bound_t2(40.0, n, m, "finite_n") == pytest.approx(expected, rel=1e-12)
    # finite-n constants are larger, so the bound is weaker than nominal
    assert bound_t2(40.0, n, m, "finite_n") >= bound_t2(40.0, n, m)


def test_finite_n_approaches_nominal():
    m = 100.0
    ratio = [
        math.log(bound_t2(400.0, n, m, "finite_n")) / math.log(bound_t2(400.0, n, m))
        for n in (100, 1000, 10000)
    ]
    assert abs(ratio[-1] - 1) < abs(ratio[0] - 1)
    assert abs(ratio[-1] - 1) < 0.01


def test_curve():
    spec = BoundSpec("t1", n=5, mean=3.0)
    assert bound_curve(spec, []) == []
    assert bound_curve(spec, [0]) == [(0.0, 1.0)]
    grid = np.linspace(0, 60, 25)
    assert bound_curve(spec, grid) == [(float(t), bound_t1(float(t), 5, 3.0)) for t in grid]
    vals = [b for _, b in bound_curve(BoundSpec("t2", n=6, mean=2.0), grid)]
    assert all(x >= y for x, y in zip(vals, vals[1:]))
    g = BoundSpec("generic", B=2.0, C=3.0)
    assert g(4.0) == bernstein_lemma(4.0, 2.0, 3.0)
    with pytest.raises(ValueError):
        BoundSpec("t4")


def test_sweep_remark_shape_with_small_mean():
    rows = sweep_t1(0.5, [10, 100, 1000, 10000], mean_scale=0.0)
    for r in rows:
        assert r["ratio"] == pytest.approx(1.0, rel=1e-12)
    bounds = [r["bound"] for r in rows]
    assert all(x > y for x, y in zip(bounds[1:], bounds[2:]))
