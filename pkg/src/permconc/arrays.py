"""Coefficient arrays with entries in [0, 1].

``Array2`` holds the n x n coefficients used by the single-permutation
statistic, ``Array3`` the n x n x n coefficients used by the two
three-dimensional statistics. Both are validated on construction and the
underlying numpy buffer is marked read-only.
"""

from __future__ import annotations

import json
from functools import cached_property
from pathlib import Path

import numpy as np

__all__ = [
    "ValidationError",
    "Array2",
    "Array3",
    "make_constant",
    "make_uniform_random",
    "make_footrule",
    "make_product",
    "load_array",
    "store_array",
    "array_to_json",
    "array_from_json",
]


class ValidationError(ValueError):
    """Raised when an array (or a file describing one) is malformed."""


def _check_entries(values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        raise ValidationError("array entries must be finite")
    if values.size and (values.min() < 0.0 or values.max() > 1.0):
        bad = values[(values < 0.0) | (values > 1.0)].flat[0]
        raise ValidationError(f"array entry {bad!r} outside [0, 1]")


class _CoefficientArray:
    dims: int = 0

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64, copy=True)
        if arr.ndim != self.dims:
            raise ValidationError(
                f"expected a {self.dims}-dimensional array, got ndim={arr.ndim}"
            )
        n = arr.shape[0]
        if n < 1 or any(s != n for s in arr.shape):
            raise ValidationError(f"array must be {'x'.join(['n'] * self.dims)}, got shape {arr.shape}")
        _check_entries(arr)
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return self._values.shape[0]

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash((self.dims, self._values.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class Array2(_CoefficientArray):
    """Square array ``a[i, j]`` (0-based storage of the 1-based a_{i,j})."""

    dims = 2


class Array3(_CoefficientArray):
    """Cubical array ``a[i, j, k]``.

    A few partial sums are cached because every statistic and move reuses
    them. All are accumulated in ascending index order.
    """

    dims = 3

    @cached_property
    def row_sums(self) -> np.ndarray:
        """``s[i, k] = sum_j a[i, j, k]``; T1 is ``sum_i s[i, sigma(i)]``."""
        a = self._values
        s = a[:, 0, :].copy()
        for j in range(1, self.n):
            s += a[:, j, :]
        s.setflags(write=False)
        return s

    @cached_property
    def sum_over_k(self) -> np.ndarray:
        """``r[i, j] = sum_k a[i, j, k]``."""
        a = self._values
        r = a[:, :, 0].copy()
        for k in range(1, self.n):
            r += a[:, :, k]
        r.setflags(write=False)
        return r

    @cached_property
    def sum_over_i(self) -> np.ndarray:
        """``r[j, k] = sum_i a[i, j, k]``."""
        a = self._values
        r = a[0].copy()
        for i in range(1, self.n):
            r += a[i]
        r.setflags(write=False)
        return r


def _make(values, dims: int):
    if dims == 2:
        return Array2(values)
    if dims == 3:
        return Array3(values)
    raise ValidationError(f"dims must be 2 or 3, got {dims!r}")


def make_constant(n: int, c: float, dims: int = 3):
    if not 0.0 <= c <= 1.0:
        raise ValidationError(f"constant {c!r} outside [0, 1]")
    if n < 1:
        raise ValidationError("n must be positive")
    return _make(np.full((n,) * dims, float(c)), dims)


def make_uniform_random(n: int, seed: int, dims: int = 3):
    """Entries drawn from ``default_rng(seed).random``; reproducible per (n, seed, dims)."""
    if n < 1:
        raise ValidationError("n must be positive")
    rng = np.random.default_rng(seed)
    return _make(rng.random((n,) * dims), dims)


def make_footrule(n: int) -> Array2:
    """Spearman footrule weights ``|i - j| / (n - 1)``."""
    if n < 2:
        raise ValidationError("footrule needs n >= 2")
    idx = np.arange(n)
    return Array2(np.abs(idx[:, None] - idx[None, :]) / (n - 1))


def make_product(c, d) -> Array2:
    c = np.asarray(c, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    if c.ndim != 1 or c.shape != d.shape or c.size == 0:
        raise ValidationError("c and d must be non-empty vectors of equal length")
    return Array2(np.outer(c, d))


def array_to_json(array) -> dict:
    return {"dims": array.dims, "n": array.n, "values": array.values.ravel().tolist()}


def array_from_json(doc) -> Array2 | Array3:
    if not isinstance(doc, dict):
        raise ValidationError("array document must be a JSON object")
    try:
        dims, n, values = doc["dims"], doc["n"], doc["values"]
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r}") from None
    if dims not in (2, 3) or isinstance(dims, bool):
        raise ValidationError(f"dims must be 2 or 3, got {dims!r}")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    if not isinstance(values, list):
        raise ValidationError("values must be a list")
    if len(values) != n**dims:
        raise ValidationError(
            f"shape error: {len(values)} values for n={n}, dims={dims} (need {n**dims})"
        )
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
        raise ValidationError("values must be numbers")
    return _make(np.asarray(values, dtype=np.float64).reshape((n,) * dims), dims)


def store_array(array, path) -> None:
    Path(path).write_text(json.dumps(array_to_json(array)) + "\n")


def load_array(path) -> Array2 | Array3:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed array file {path}: {exc}") from None
    return array_from_json(doc)
