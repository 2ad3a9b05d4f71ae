"""Exchangeable-pair moves for T1 and T2 and their per-state functionals.

T1 move: draw I1, I2 independently and uniformly (with replacement) and
set sigma' = sigma o (I1 I2).

T2 move: draw an ordered triple of distinct indices and a fair coin;
coin 0 gives (sigma o tau1, pi o tau2), coin 1 gives (sigma o tau2, pi o tau1),
where tau1 = (I1 I2 I3) and tau2 = (I1 I3 I2).

Every ``delta`` is T - T' (old minus new). Conditional functionals here are
exact averages over *all* moves from a fixed state (sigma or (sigma, pi)),
which is finer than conditioning on the value of the statistic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import Array3
from .permutations import (
    IndexTriple,
    Permutation,
    c3_triples,
    sample_distinct_triple,
)
from .statistics import _as_array, mean_t1, mean_t2, t1, t2, y_stat

__all__ = [
    "PairSampleT1",
    "PairSampleT2",
    "step_t1",
    "step_t2",
    "apply_t1_move",
    "apply_t2_move",
    "t1_deltas",
    "t2_deltas",
    "delta_t1_batch",
    "delta_t2_batch",
    "F_scale_t1",
    "F_scale_t2",
    "cond_drift_t1",
    "cond_drift_t2",
    "drift_t2_closed_form",
    "f_t1",
    "f_t2_state",
    "v_t1",
    "moment_bounds_t2",
    "moment_upper_bounds_t2",
    "v_t2_coefficients",
    "v_t2_state",
    "f_t2_shift_range",
    "sandwich_width",
    "envelope_eps",
    "v_t2_envelope",
]


@dataclass(frozen=True)
class PairSampleT1:
    sigma: Permutation
    i1: int
    i2: int
    delta: float


@dataclass(frozen=True)
class PairSampleT2:
    sigma: Permutation
    pi: Permutation
    triple: IndexTriple
    coin: int
    delta: float


def _need_three(n: int) -> None:
    if n < 3:
        raise ValueError(f"the T2 move needs n >= 3, got n={n}")


# T1 ---------------------------------------------------------------------


def delta_t1_batch(a: Array3, sigmas, i1, i2) -> np.ndarray:
    """Vectorised T1 - T1' for 0-based index arrays (one move per row)."""
    s = a.row_sums
    sigmas = np.atleast_2d(sigmas)
    rows = np.arange(sigmas.shape[0])
    si1, si2 = sigmas[rows, i1], sigmas[rows, i2]
    return (s[i1, si1] + s[i2, si2]) - (s[i1, si2] + s[i2, si1])


def t1_deltas(a: Array3, sigma) -> np.ndarray:
    """(n, n) matrix of T1 - T1' for every ordered (I1, I2), 0-based."""
    p = _as_array(sigma)
    g = a.row_sums[:, p]  # g[i, l] = s[i, sigma(l)]
    d = np.diag(g)
    return (d[:, None] + d[None, :]) - (g + g.T)


def apply_t1_move(sigma: Permutation, i1: int, i2: int) -> Permutation:
    """sigma o (i1 i2), 1-based indices."""
    p = sigma.array.copy()
    p[i1 - 1], p[i2 - 1] = p[i2 - 1], p[i1 - 1]
    return Permutation.from_zero_based(p)


def step_t1(a: Array3, sigma: Permutation, rng: np.random.Generator) -> PairSampleT1:
    n = a.n
    i1 = int(rng.integers(0, n))
    i2 = int(rng.integers(0, n))
    delta = float(delta_t1_batch(a, sigma.array, np.array([i1]), np.array([i2]))[0])
    return PairSampleT1(sigma, i1 + 1, i2 + 1, delta)


def F_scale_t1(n: int) -> float:
    """F(T1, T1') = (n / 2) (T1 - T1')."""
    return n / 2


def cond_drift_t1(a: Array3, sigma) -> float:
    """Exact E[T1 - T1' | sigma], averaged over all n^2 index pairs."""
    return float(t1_deltas(a, sigma).mean())


def f_t1(a: Array3, sigma) -> float:
    return t1(a, sigma) - mean_t1(a)


def v_t1(a: Array3, sigma) -> float:
    """(n / 4) E[(T1 - T1')^2 | sigma]."""
    d = t1_deltas(a, sigma)
    return a.n / 4 * float(np.mean(d * d))


# T2 ---------------------------------------------------------------------


def delta_t2_batch(a: Array3, sigmas, pis, triples, coins) -> np.ndarray:
    """Vectorised T2 - T2' for 0-based triples (m, 3) and coins (m,)."""
    v = a.values
    sigmas, pis = np.atleast_2d(sigmas), np.atleast_2d(pis)
    rows = np.arange(triples.shape[0])
    i1, i2, i3 = triples[:, 0], triples[:, 1], triples[:, 2]
    s1, s2, s3 = sigmas[rows, i1], sigmas[rows, i2], sigmas[rows, i3]
    p1, p2, p3 = pis[rows, i1], pis[rows, i2], pis[rows, i3]
    old = v[i1, s1, p1] + v[i2, s2, p2] + v[i3, s3, p3]
    # coin 0: sigma o tau1, pi o tau2; coin 1: sigma o tau2, pi o tau1
    new0 = v[i1, s2, p3] + v[i2, s3, p1] + v[i3, s1, p2]
    new1 = v[i1, s3, p2] + v[i2, s1, p3] + v[i3, s2, p1]
    return old - np.where(coins == 0, new0, new1)


def t2_deltas(a: Array3, sigma, pi, triples: np.ndarray | None = None) -> np.ndarray:
    """(T, 2) deltas for every C3 triple (rows) and coin (columns)."""
    _need_three(a.n)
    if triples is None:
        triples = c3_triples(a.n)
    m = triples.shape[0]
    sig = np.broadcast_to(_as_array(sigma), (m, a.n))
    pi_ = np.broadcast_to(_as_array(pi), (m, a.n))
    zeros, ones = np.zeros(m, dtype=np.int64), np.ones(m, dtype=np.int64)
    return np.stack(
        [delta_t2_batch(a, sig, pi_, triples, zeros), delta_t2_batch(a, sig, pi_, triples, ones)],
        axis=1,
    )


def apply_t2_move(sigma: Permutation, pi: Permutation, triple: IndexTriple, coin: int):
    """Return (sigma', pi') for the given triple and coin."""
    i1, i2, i3 = triple.i1 - 1, triple.i2 - 1, triple.i3 - 1
    s, p = sigma.array, pi.array
    fwd = {i1: i2, i2: i3, i3: i1}  # tau1
    bwd = {i1: i3, i3: i2, i2: i1}  # tau2
    ts, tp = (fwd, bwd) if coin == 0 else (bwd, fwd)
    s2, p2 = s.copy(), p.copy()
    for i in (i1, i2, i3):
        s2[i] = s[ts[i]]
        p2[i] = p[tp[i]]
    return Permutation.from_zero_based(s2), Permutation.from_zero_based(p2)


def step_t2(a: Array3, sigma: Permutation, pi: Permutation, rng: np.random.Generator) -> PairSampleT2:
    _need_three(a.n)
    triple = sample_distinct_triple(a.n, rng)
    coin = int(rng.integers(0, 2))
    tri = np.array([[triple.i1 - 1, triple.i2 - 1, triple.i3 - 1]])
    delta = float(delta_t2_batch(a, sigma.array, pi.array, tri, np.array([coin]))[0])
    return PairSampleT2(sigma, pi, triple, coin, delta)


def F_scale_t2(n: int) -> float:
    """F(T2, T2') = n(n-1)(n-2) / (3(n^2 - 3n + 3)) (T2 - T2')."""
    return n * (n - 1) * (n - 2) / (3 * (n * n - 3 * n + 3))


def cond_drift_t2(a: Array3, sigma, pi) -> float:
    """Exact E[T2 - T2' | sigma, pi] over all C3 triples and both coins."""
    return float(t2_deltas(a, sigma, pi).mean())


def drift_t2_closed_form(a: Array3, sigma, pi) -> float:
    n = a.n
    _need_three(n)
    m = mean_t2(a)
    nn = n * (n - 1) * (n - 2)
    return (
        3 * (n * n - 3 * n + 3) / nn * (t2(a, sigma, pi) - m)
        - 9 * m / (n * (n - 2))
        + 3 * y_stat(a, sigma, pi) / nn
    )


def f_t2_state(a: Array3, sigma, pi) -> float:
    """Drift of F given (sigma, pi), with Y(sigma, pi) in place of E[Y | T2]."""
    n = a.n
    _need_three(n)
    m = mean_t2(a)
    q = n * n - 3 * n + 3
    return t2(a, sigma, pi) - m - 3 * (n - 1) * m / q + y_stat(a, sigma, pi) / q


def f_t2_shift_range(n: int, mean: float) -> tuple[float, float]:
    """Range of f - (T2 - E[T2]) over all states, from 0 <= Y <= 3n(n-1)."""
    _need_three(n)
    q = n * n - 3 * n + 3
    lo = -3 * (n - 1) * mean / q
    return lo, lo + 3 * n * (n - 1) / q


def sandwich_width(n: int, mean: float) -> float:
    """delta_n with |f - (T2 - E[T2])| <= delta_n for every state."""
    lo, hi = f_t2_shift_range(n, mean)
    return max(-lo, hi)


def moment_bounds_t2(a: Array3, sigma, pi) -> tuple[float, float]:
    """Exact (E|T2 - T2'|, E(T2 - T2')^2) given (sigma, pi)."""
    d = t2_deltas(a, sigma, pi)
    return float(np.abs(d).mean()), float((d * d).mean())


def moment_upper_bounds_t2(n: int, t2_value: float, mean: float) -> tuple[float, float]:
    """Upper bounds for the two moments as functions of T2 and E[T2]."""
    k = n / ((n - 1) * (n - 2))
    return 3 / n * t2_value + 3 * k * mean, 9 / n * t2_value + 9 * k * mean


def v_t2_coefficients(n: int) -> tuple[float, float]:
    """Weights (c_sq, c_abs) with v(T2) <= c_sq E[delta^2] + c_abs E|delta|."""
    _need_three(n)
    q = n * n - 3 * n + 3
    c_sq = n * (n - 1) * (n - 2) / (6 * q)
    c_abs = n**2 * (n - 1) ** 2 * (n - 2) / (2 * q**2)
    return c_sq, c_abs


def v_t2_state(a: Array3, sigma, pi) -> float:
    m1, m2 = moment_bounds_t2(a, sigma, pi)
    c_sq, c_abs = v_t2_coefficients(a.n)
    return c_sq * m2 + c_abs * m1


def envelope_eps(n: int) -> float:
    """Finite-n slack eps_n in v(T2) <= (3 + eps_n)(f + 2 E[T2] + 3 + eps_n).

    Substituting the moment bounds gives v <= alpha T2 + beta E[T2]; with
    a_n = max(alpha, beta) this is <= a_n (T2 + E[T2]). Since
    T2 - E[T2] <= f + 3(n-1)E[T2]/q and E[T2] <= n, the shift is at most
    3n(n-1)/q. eps_n covers both excesses over 3 and is O(1/n).
    """
    _need_three(n)
    q = n * n - 3 * n + 3
    alpha = 3 * (n - 1) * (n - 2) / (2 * q) + 3 * n * (n - 1) ** 2 * (n - 2) / (2 * q**2)
    beta = 3 * n**2 / (2 * q) + 3 * n**3 * (n - 1) / (2 * q**2)
    shift = 3 * n * (n - 1) / q
    return max(max(alpha, beta) - 3, shift - 3, 0.0)


def v_t2_envelope(n: int, f_value: float, mean: float) -> float:
    eps = envelope_eps(n)
    return (3 + eps) * (f_value + 2 * mean + 3 + eps)
