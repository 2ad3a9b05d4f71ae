"""Permutations of {1..n}, uniform sampling, and the two exchange moves.

Indices are 1-based at the API boundary (``transposition(3, 1, 2)`` swaps
the first two points) and 0-based in storage. Composition applies the
right factor first: ``compose(a, b)(i) == a(b(i))``.

Random draws come from ``numpy.random.Generator`` streams. Draw counts are
fixed: ``sample_uniform`` makes n - 1 bounded-integer draws (Fisher-Yates,
positions n-1 down to 1) and ``sample_distinct_triple`` makes exactly 3.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "InvalidMoveError",
    "Permutation",
    "TupleClass",
    "IndexTriple",
    "make_stream",
    "identity",
    "sample_uniform",
    "sample_uniform_batch",
    "compose",
    "transposition",
    "cycle_tau",
    "sample_distinct_triple",
    "classify_tuple",
    "c3_triples",
]


class InvalidMoveError(ValueError):
    """Raised for a move that would not produce a valid permutation."""


def make_stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based (Philox) stream for ``seed`` and an optional substream key.

    ``make_stream(s, b)`` for different ``b`` gives independent streams, so
    work can be split into blocks without changing results.
    """
    ss = np.random.SeedSequence(seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))


class Permutation:
    """A bijection of {1..n}.

    Build from 1-based images with ``Permutation([2, 3, 1])`` or from a
    0-based array with ``Permutation.from_zero_based``.
    """

    __slots__ = ("_p",)

    def __init__(self, images):
        p = np.asarray(images, dtype=np.int64) - 1
        self._p = _checked(p)

    @classmethod
    def from_zero_based(cls, p) -> Permutation:
        obj = cls.__new__(cls)
        obj._p = _checked(np.array(p, dtype=np.int64))
        return obj

    @property
    def n(self) -> int:
        return self._p.size

    @property
    def array(self) -> np.ndarray:
        """0-based image array (read-only)."""
        return self._p

    @property
    def map(self) -> list[int]:
        """1-based images, ``map[i-1] == self(i)``."""
        return (self._p + 1).tolist()

    def __call__(self, i: int) -> int:
        return int(self._p[i - 1]) + 1

    def inverse(self) -> Permutation:
        inv = np.empty_like(self._p)
        inv[self._p] = np.arange(self.n)
        return Permutation.from_zero_based(inv)

    def to_json(self) -> dict:
        return {"n": self.n, "map": self.map}

    @classmethod
    def from_json(cls, doc) -> Permutation:
        perm = cls(doc["map"])
        if perm.n != doc["n"]:
            raise ValueError(f"map has {perm.n} entries but n={doc['n']}")
        return perm

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self._p, other._p)

    def __hash__(self):
        return hash(self._p.tobytes())

    def __repr__(self):
        return f"Permutation({self.map})"


def _checked(p: np.ndarray) -> np.ndarray:
    if p.ndim != 1 or p.size == 0:
        raise ValueError("a permutation needs a non-empty 1-d image array")
    seen = np.zeros(p.size, dtype=bool)
    if p.min() < 0 or p.max() >= p.size:
        raise ValueError("permutation image out of range")
    seen[p] = True
    if not seen.all():
        raise ValueError("permutation map is not a bijection")
    p = p.copy()
    p.setflags(write=False)
    return p


def identity(n: int) -> Permutation:
    return Permutation.from_zero_based(np.arange(n))


def sample_uniform(n: int, rng: np.random.Generator) -> Permutation:
    """Uniform permutation by Fisher-Yates (n - 1 draws)."""
    if n < 1:
        raise ValueError("n must be positive")
    p = np.arange(n)
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        p[i], p[j] = p[j], p[i]
    return Permutation.from_zero_based(p)


def sample_uniform_batch(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """``m`` independent uniform permutations as an (m, n) 0-based array.

    Vectorised Fisher-Yates: one call of ``rng.integers(0, i + 1, m)`` per
    position i = n-1, ..., 1.
    """
    perms = np.tile(np.arange(n, dtype=np.int64), (m, 1))
    rows = np.arange(m)
    for i in range(n - 1, 0, -1):
        j = rng.integers(0, i + 1, size=m)
        tmp = perms[rows, j]
        perms[rows, j] = perms[:, i]
        perms[:, i] = tmp
    return perms


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``a o b``: apply ``b`` first."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    return Permutation.from_zero_based(a.array[b.array])


def _check_index(n: int, *idx: int) -> None:
    for i in idx:
        if not 1 <= i <= n:
            raise IndexError(f"index {i} outside 1..{n}")


def transposition(n: int, i1: int, i2: int) -> Permutation:
    _check_index(n, i1, i2)
    p = np.arange(n)
    p[i1 - 1], p[i2 - 1] = i2 - 1, i1 - 1
    return Permutation.from_zero_based(p)


class TupleClass(enum.Enum):
    C1 = 1
    C2 = 2
    C3 = 3


def classify_tuple(i1: int, i2: int, i3: int) -> TupleClass:
    return TupleClass(len({i1, i2, i3}))


@dataclass(frozen=True)
class IndexTriple:
    """Ordered index triple (1-based) with its distinct-count class."""

    i1: int
    i2: int
    i3: int

    @property
    def kind(self) -> TupleClass:
        return classify_tuple(self.i1, self.i2, self.i3)


def cycle_tau(variant: int, triple: IndexTriple, n: int) -> Permutation:
    """3-cycle on the triple: variant 1 is I1->I2->I3->I1, variant 2 its inverse."""
    if triple.kind is not TupleClass.C3:
        raise InvalidMoveError(
            f"3-cycle needs three distinct indices, got {triple} ({triple.kind.name})"
        )
    _check_index(n, triple.i1, triple.i2, triple.i3)
    i1, i2, i3 = triple.i1 - 1, triple.i2 - 1, triple.i3 - 1
    p = np.arange(n)
    if variant == 1:
        p[i1], p[i2], p[i3] = i2, i3, i1
    elif variant == 2:
        p[i1], p[i3], p[i2] = i3, i2, i1
    else:
        raise ValueError(f"variant must be 1 or 2, got {variant!r}")
    return Permutation.from_zero_based(p)


def sample_distinct_triple(n: int, rng: np.random.Generator) -> IndexTriple:
    """Uniform ordered triple of distinct indices (3 draws)."""
    if n < 3:
        raise ValueError(f"need n >= 3 for three distinct indices, got n={n}")
    i1 = int(rng.integers(0, n))
    i2 = int(rng.integers(0, n - 1))
    i2 += i2 >= i1
    i3 = int(rng.integers(0, n - 2))
    lo, hi = min(i1, i2), max(i1, i2)
    i3 += i3 >= lo
    i3 += i3 >= hi
    return IndexTriple(i1 + 1, i2 + 1, i3 + 1)


def c3_triples(n: int) -> np.ndarray:
    """All n(n-1)(n-2) ordered distinct triples, 0-based, lexicographic."""
    idx = np.arange(n)
    g = np.stack(np.meshgrid(idx, idx, idx, indexing="ij"), axis=-1).reshape(-1, 3)
    keep = (g[:, 0] != g[:, 1]) & (g[:, 0] != g[:, 2]) & (g[:, 1] != g[:, 2])
    return g[keep]
