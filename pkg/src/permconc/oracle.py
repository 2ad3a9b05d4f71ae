"""Exact enumeration over S_n and S_n x S_n for small n.

Outcomes are grouped by exact float equality. That is sound because every
statistic is evaluated with the same left-to-right summation (see
``statistics.ordered_sum``), so one state always yields one float.
Probabilities stay as integer counts until the final division.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arrays import Array2, Array3
from .permutations import c3_triples
from .statistics import StatKind, mean_t2, t1_batch, t2_batch, t3_batch, y_batch

__all__ = [
    "EnumerationCapError",
    "CAPS",
    "ExactDistribution",
    "all_permutations",
    "exact_distribution",
    "exact_tail",
    "exact_tails",
    "verify_exchangeable_t1",
    "verify_exchangeable_t2",
    "T2Groups",
    "t2_groups",
    "cond_mean_y",
]

CAPS = {
    "t1": 8,
    "t3": 8,
    "t2": 7,
    "exchange-t1": 5,
    "exchange-t2": 4,
}


class EnumerationCapError(ValueError):
    """Raised when n is above the enumeration limit for an oracle."""


def _cap(what: str, n: int) -> None:
    if n > CAPS[what]:
        raise EnumerationCapError(
            f"{what}: exact enumeration is limited to n <= {CAPS[what]}, got n={n}"
        )


@lru_cache(maxsize=16)
def all_permutations(n: int) -> np.ndarray:
    """(n!, n) array of 0-based permutations in lexicographic order."""
    if n > max(CAPS.values()):
        raise EnumerationCapError(f"refusing to list all permutations of n={n}")
    out = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ExactDistribution:
    values: np.ndarray  # ascending, distinct
    counts: np.ndarray  # int64
    total: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> ExactDistribution:
        values, counts = np.unique(samples, return_counts=True)
        return cls(values, counts.astype(np.int64), int(samples.size))

    @property
    def outcomes(self) -> list[tuple[float, int]]:
        return list(zip(self.values.tolist(), self.counts.tolist()))

    def mean(self) -> float:
        return math.fsum((self.values * self.counts).tolist()) / self.total

    def variance(self) -> float:
        mu = self.mean()
        return math.fsum(((self.values - mu) ** 2 * self.counts).tolist()) / self.total

    def to_json(self) -> dict:
        return {"total": self.total, "outcomes": [[v, c] for v, c in self.outcomes]}

    @classmethod
    def from_json(cls, doc) -> ExactDistribution:
        pairs = doc["outcomes"]
        values = np.array([float(v) for v, _ in pairs])
        counts = np.array([int(c) for _, c in pairs], dtype=np.int64)
        if int(counts.sum()) != doc["total"]:
            raise ValueError("outcome counts do not sum to total")
        if np.any(np.diff(values) <= 0):
            raise ValueError("outcome values must be strictly ascending")
        return cls(values, counts, int(doc["total"]))


def exact_distribution(a, kind) -> ExactDistribution:
    kind = StatKind(kind)
    if kind.dims != a.dims:
        raise ValueError(f"{kind.name} needs a {kind.dims}-d array, got {a.dims}-d")
    n = a.n
    _cap(kind.value, n)
    perms = all_permutations(n)
    if kind is StatKind.T3:
        return ExactDistribution.from_samples(t3_batch(a, perms))
    if kind is StatKind.T1:
        return ExactDistribution.from_samples(t1_batch(a, perms))
    return ExactDistribution.from_samples(_t2_all_states(a)[0])


def _t2_all_states(a: Array3, with_y: bool = False):
    """T2 (and optionally Y) for all (sigma, pi), sigma-major order."""
    perms = all_permutations(a.n)
    m = perms.shape[0]
    values = np.empty(m * m)
    ys = np.empty(m * m) if with_y else None
    block = max(1, 2**18 // m)
    for start in range(0, m, block):
        sig = perms[start : start + block]
        b = sig.shape[0]
        sigmas = np.repeat(sig, m, axis=0)
        pis = np.tile(perms, (b, 1))
        sl = slice(start * m, (start + b) * m)
        values[sl] = t2_batch(a, sigmas, pis)
        if with_y:
            ys[sl] = y_batch(a, sigmas, pis)
    return values, ys


def exact_tail(dist: ExactDistribution, center: float, t: float) -> Fraction:
    """P(|X - center| >= t) as an exact fraction of the state count."""
    if t < 0:
        raise ValueError("t must be non-negative")
    hits = int(dist.counts[np.abs(dist.values - center) >= t].sum())
    return Fraction(hits, dist.total)


def exact_tails(dist: ExactDistribution, center: float, t_grid) -> list[Fraction]:
    return [exact_tail(dist, center, float(t)) for t in t_grid]


def _max_asymmetry(x: np.ndarray, xp: np.ndarray, total: int) -> float:
    pairs, counts = np.unique(np.stack([x, xp], axis=1), axis=0, return_counts=True)
    table = {(float(u), float(v)): int(c) for (u, v), c in zip(pairs, counts)}
    worst = 0
    for (u, v), c in table.items():
        worst = max(worst, abs(c - table.get((v, u), 0)))
    return float(Fraction(worst, total))


def verify_exchangeable_t1(a: Array3, mutation: str | None = None) -> float:
    """Largest |P(T1=x, T1'=x') - P(T1=x', T1'=x)| over all (sigma, I1, I2).

    ``mutation="half-swap"`` replaces the transposition by sigma'(I1) = sigma(I2)
    with sigma'(I2) left alone; used as a negative control.
    """
    n = a.n
    _cap("exchange-t1", n)
    perms = all_permutations(n)
    m = perms.shape[0]
    i1, i2 = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    i1, i2 = i1.ravel(), i2.ravel()
    sig = np.repeat(perms, n * n, axis=0)
    j1, j2 = np.tile(i1, m), np.tile(i2, m)
    rows = np.arange(sig.shape[0])
    moved = sig.copy()
    if mutation is None:
        moved[rows, j1] = sig[rows, j2]
        moved[rows, j2] = sig[rows, j1]
    elif mutation == "half-swap":
        moved[rows, j1] = sig[rows, j2]
    else:
        raise ValueError(f"unknown T1 mutation {mutation!r}")
    return _max_asymmetry(t1_batch(a, sig), t1_batch(a, moved), sig.shape[0])


def verify_exchangeable_t2(a: Array3, mutation: str | None = None) -> float:
    """Same as the T1 check over all (sigma, pi, C3 triple, coin).

    Mutations (negative controls):
    ``"tau1-both"`` applies tau1 to both sigma and pi, ignoring the coin.
    ``"half-cycle"`` moves only position I1 of sigma, so sigma' is not a
    permutation; pi gets its usual cycle.
    """
    n = a.n
    if n < 3:
        raise ValueError("the T2 move needs n >= 3")
    _cap("exchange-t2", n)
    perms = all_permutations(n)
    m = perms.shape[0]
    tri = c3_triples(n)
    k = tri.shape[0]
    sig = np.repeat(perms, m, axis=0)
    pi = np.tile(perms, (m, 1))
    # expand states x triples x coins
    sig = np.repeat(sig, 2 * k, axis=0)
    pi = np.repeat(pi, 2 * k, axis=0)
    tri = np.tile(np.repeat(tri, 2, axis=0), (m * m, 1))
    coin = np.tile(np.array([0, 1]), m * m * k)
    rows = np.arange(sig.shape[0])
    i1, i2, i3 = tri[:, 0], tri[:, 1], tri[:, 2]
    # tau1 as a source map: position I1 reads I2, I2 reads I3, I3 reads I1
    fwd = [(i1, i2), (i2, i3), (i3, i1)]
    bwd = [(i1, i3), (i3, i2), (i2, i1)]
    s_new, p_new = sig.copy(), pi.copy()
    if mutation is None:
        for (dst_f, src_f), (dst_b, src_b) in zip(fwd, bwd):
            c0 = coin == 0
            s_new[rows[c0], dst_f[c0]] = sig[rows[c0], src_f[c0]]
            p_new[rows[c0], dst_b[c0]] = pi[rows[c0], src_b[c0]]
            c1 = ~c0
            s_new[rows[c1], dst_b[c1]] = sig[rows[c1], src_b[c1]]
            p_new[rows[c1], dst_f[c1]] = pi[rows[c1], src_f[c1]]
    elif mutation == "tau1-both":
        for dst, src in fwd:
            s_new[rows, dst] = sig[rows, src]
            p_new[rows, dst] = pi[rows, src]
    elif mutation == "half-cycle":
        s_new[rows, i1] = sig[rows, i2]
        for dst, src in bwd:
            p_new[rows, dst] = pi[rows, src]
    else:
        raise ValueError(f"unknown T2 mutation {mutation!r}")
    return _max_asymmetry(t2_batch(a, sig, pi), t2_batch(a, s_new, p_new), sig.shape[0])


@dataclass(frozen=True)
class T2Groups:
    """States of (sigma, pi) grouped by the exact value of T2.

    ``mean_y[g]`` is E[Y | T2 = values[g]] and ``f[g]`` the drift function
    f(T2) evaluated with that conditional mean.
    """

    n: int
    mean: float
    values: np.ndarray
    counts: np.ndarray
    mean_y: np.ndarray

    @property
    def f(self) -> np.ndarray:
        n, m = self.n, self.mean
        q = n * n - 3 * n + 3
        return self.values - m - 3 * (n - 1) * m / q + self.mean_y / q

    @property
    def drift(self) -> np.ndarray:
        """E[T2 - T2' | T2] from the closed form with E[Y | T2]."""
        n, m = self.n, self.mean
        nn = n * (n - 1) * (n - 2)
        return (
            3 * (n * n - 3 * n + 3) / nn * (self.values - m)
            - 9 * m / (n * (n - 2))
            + 3 * self.mean_y / nn
        )


def t2_groups(a: Array3) -> T2Groups:
    _cap("t2", a.n)
    values, ys = _t2_all_states(a, with_y=True)
    uniq, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    ysum = np.bincount(inverse, weights=ys, minlength=uniq.size)
    return T2Groups(a.n, mean_t2(a), uniq, counts.astype(np.int64), ysum / counts)


def cond_mean_y(a: Array3, t2_value: float, groups: T2Groups | None = None) -> float:
    """E[Y(sigma, pi) | T2 = t2_value], exact."""
    g = groups if groups is not None else t2_groups(a)
    idx = np.searchsorted(g.values, t2_value)
    if idx >= g.values.size or g.values[idx] != t2_value:
        raise KeyError(f"{t2_value!r} is not an attainable T2 value")
    return float(g.mean_y[idx])
