"""The permutation statistics T1, T2, T3, their means, and the C2 sum Y.

Every sum runs over the permutation position i in ascending order, in both
the scalar and the batched versions, so a given state always produces the
same float. The oracle relies on this to group equal outcomes exactly.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .arrays import Array2, Array3
from .permutations import Permutation

__all__ = [
    "StatKind",
    "ordered_sum",
    "t1",
    "t2",
    "t3",
    "t1_batch",
    "t2_batch",
    "t3_batch",
    "mean_t1",
    "mean_t2",
    "mean_t3",
    "y_stat",
    "y_batch",
]


class StatKind(str, enum.Enum):
    T1 = "t1"
    T2 = "t2"
    T3 = "t3"

    @property
    def dims(self) -> int:
        return 2 if self is StatKind.T3 else 3


def ordered_sum(terms: np.ndarray) -> np.ndarray:
    """Sum an (m, n) array along its last axis strictly left to right."""
    acc = terms[..., 0].copy()
    for i in range(1, terms.shape[-1]):
        acc += terms[..., i]
    return acc


def _as_array(perm) -> np.ndarray:
    return perm.array if isinstance(perm, Permutation) else np.asarray(perm)


def _check(a, *perms) -> None:
    for p in perms:
        if p.shape[-1] != a.n:
            raise ValueError(f"size mismatch: array n={a.n}, permutation n={p.shape[-1]}")


def t3_batch(a: Array2, sigmas: np.ndarray) -> np.ndarray:
    sigmas = np.atleast_2d(sigmas)
    _check(a, sigmas)
    return ordered_sum(a.values[np.arange(a.n), sigmas])


def t1_batch(a: Array3, sigmas: np.ndarray) -> np.ndarray:
    sigmas = np.atleast_2d(sigmas)
    _check(a, sigmas)
    return ordered_sum(a.row_sums[np.arange(a.n), sigmas])


def t2_batch(a: Array3, sigmas: np.ndarray, pis: np.ndarray) -> np.ndarray:
    sigmas, pis = np.atleast_2d(sigmas), np.atleast_2d(pis)
    _check(a, sigmas, pis)
    return ordered_sum(a.values[np.arange(a.n), sigmas, pis])


def t3(a: Array2, sigma) -> float:
    """``sum_i a[i, sigma(i)]``."""
    return float(t3_batch(a, _as_array(sigma))[0])


def t1(a: Array3, sigma) -> float:
    """``sum_i sum_j a[i, j, sigma(i)]`` via the cached row sums."""
    return float(t1_batch(a, _as_array(sigma))[0])


def t2(a: Array3, sigma, pi) -> float:
    """``sum_i a[i, sigma(i), pi(i)]``."""
    return float(t2_batch(a, _as_array(sigma), _as_array(pi))[0])


def mean_t1(a: Array3) -> float:
    return math.fsum(a.values.ravel()) / a.n


def mean_t2(a: Array3) -> float:
    return math.fsum(a.values.ravel()) / a.n**2


def mean_t3(a: Array2) -> float:
    return math.fsum(a.values.ravel()) / a.n


def y_batch(a: Array3, sigmas: np.ndarray, pis: np.ndarray) -> np.ndarray:
    """Y for each row of (sigmas, pis).

    The C2 tuples split into i=j!=k, i=k!=j and j=k!=i; each family is a
    full partial sum minus the diagonal, which gives an O(n) formula.
    """
    sigmas, pis = np.atleast_2d(sigmas), np.atleast_2d(pis)
    _check(a, sigmas, pis)
    rows = np.arange(a.n)
    diag = ordered_sum(a.values[rows, sigmas, pis])
    fam_ij = ordered_sum(a.sum_over_k[rows, sigmas])
    fam_ik = ordered_sum(a.row_sums[rows, pis])
    fam_jk = ordered_sum(a.sum_over_i[sigmas, pis])
    return fam_ij + fam_ik + fam_jk - 3.0 * diag


def y_stat(a: Array3, sigma, pi) -> float:
    """``sum over C2 tuples (i, j, k) of a[i, sigma(j), pi(k)]``."""
    return float(y_batch(a, _as_array(sigma), _as_array(pi))[0])
