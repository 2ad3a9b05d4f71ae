import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from permconc.permutations import (
    IndexTriple,
    InvalidMoveError,
    Permutation,
    TupleClass,
    c3_triples,
    classify_tuple,
    compose,
    cycle_tau,
    identity,
    make_stream,
    sample_distinct_triple,
    sample_uniform,
    sample_uniform_batch,
    transposition,
)

perms = st.integers(1, 7).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


def test_bijection_check():
    with pytest.raises(ValueError):
        Permutation([1, 1, 2])
    with pytest.raises(ValueError):
        Permutation([0, 1])
    assert Permutation([2, 3, 1])(1) == 2


def test_json_round_trip():
    p = Permutation([2, 3, 1])
    assert p.to_json() == {"n": 3, "map": [2, 3, 1]}
    assert Permutation.from_json(p.to_json()) == p


def test_sample_n1_is_identity():
    assert sample_uniform(1, make_stream(0)) == identity(1)


def test_sample_uniform_chi_square():
    rng = make_stream(5)
    draws = sample_uniform_batch(3, 600_000, rng)
    counts = Counter(map(tuple, draws.tolist()))
    assert len(counts) == 6
    freq = np.array(list(counts.values()))
    se = np.sqrt(600_000 * (1 / 6) * (5 / 6))
    assert np.all(np.abs(freq - 100_000) < 4 * se)
    assert stats.chisquare(freq).pvalue > 1e-4


def test_scalar_sampler_uniform():
    rng = make_stream(9)
    counts = Counter(tuple(sample_uniform(3, rng).map) for _ in range(30_000))
    assert len(counts) == 6
    assert stats.chisquare(list(counts.values())).pvalue > 1e-4


def test_sigma_of_one_uniform():
    draws = sample_uniform_batch(6, 120_000, make_stream(3))
    freq = np.bincount(draws[:, 0], minlength=6)
    assert stats.chisquare(freq).pvalue > 1e-4


def test_batch_outputs_are_bijections():
    draws = sample_uniform_batch(9, 1000, make_stream(1))
    assert np.all(np.sort(draws, axis=1) == np.arange(9))


@given(perms)
def test_compose_identity(images):
    p = Permutation(images)
    assert compose(p, identity(p.n)) == p
    assert compose(identity(p.n), p) == p
    assert compose(p, p.inverse()) == identity(p.n)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(*[st.permutations(list(range(1, n + 1)))] * 3)))
def test_compose_associative(triple):
    a, b, c = (Permutation(x) for x in triple)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_compose_applies_right_first():
    a, b = Permutation([2, 3, 1]), transposition(3, 1, 2)
    ab = compose(a, b)
    assert all(ab(i) == a(b(i)) for i in range(1, 4))
    with pytest.raises(ValueError):
        compose(identity(2), identity(3))


def test_transposition():
    assert transposition(3, 1, 2).map == [2, 1, 3]
    assert transposition(3, 2, 2) == identity(3)
    t = transposition(5, 2, 4)
    assert compose(t, t) == identity(5)
    with pytest.raises(IndexError):
        transposition(3, 0, 2)


def test_cycle_tau_examples():
    t = IndexTriple(1, 2, 3)
    assert cycle_tau(1, t, 3).map == [2, 3, 1]
    assert cycle_tau(2, t, 4).map == [3, 1, 2, 4]
    with pytest.raises(InvalidMoveError):
        cycle_tau(1, IndexTriple(1, 1, 2), 3)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_tau_mutually_inverse_exhaustive(n):
    for i1, i2, i3 in c3_triples(n) + 1:
        t = IndexTriple(int(i1), int(i2), int(i3))
        one, two = cycle_tau(1, t, n), cycle_tau(2, t, n)
        assert compose(one, two) == identity(n)
        assert compose(two, one) == identity(n)


def test_classify():
    assert classify_tuple(1, 1, 1) is TupleClass.C1
    assert classify_tuple(1, 1, 2) is TupleClass.C2
    assert classify_tuple(1, 2, 3) is TupleClass.C3


@pytest.mark.parametrize("n", range(1, 9))
def test_class_counts(n):
    counts = Counter(classify_tuple(*t) for t in itertools.product(range(n), repeat=3))
    assert counts[TupleClass.C1] == n
    assert counts[TupleClass.C2] == 3 * n * (n - 1)
    assert counts[TupleClass.C3] == n * (n - 1) * (n - 2)
    assert len(c3_triples(n)) == n * (n - 1) * (n - 2)


def test_distinct_triple_sampler():
    rng = make_stream(2)
    draws = [sample_distinct_triple(3, rng) for _ in range(60_000)]
    assert all(t.kind is TupleClass.C3 for t in draws)
    counts = Counter((t.i1, t.i2, t.i3) for t in draws)
    assert len(counts) == 6
    assert stats.chisquare(list(counts.values())).pvalue > 1e-4
    with pytest.raises(ValueError):
        sample_distinct_triple(2, rng)


def test_distinct_triple_uniform_n5():
    rng = make_stream(4)
    counts = Counter()
    for _ in range(60_000):
        t = sample_distinct_triple(5, rng)
        counts[(t.i1, t.i2, t.i3)] += 1
    assert len(counts) == 60
    assert stats.chisquare(list(counts.values())).pvalue > 1e-4


def test_streams_reproducible_and_independent():
    a = make_stream(7, 0).random(4)
    assert np.array_equal(a, make_stream(7, 0).random(4))
    assert not np.array_equal(a, make_stream(7, 1).random(4))
