"""Monte Carlo tail and pair-moment estimates.

Samples are split into fixed blocks of ``BLOCK`` draws. Block ``k`` uses
its own Philox stream ``make_stream(seed, k)``, and block results are
reduced in block order. The output therefore depends only on the inputs
and the seed, never on how many threads did the work.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .arrays import Array2, Array3
from .exchange import delta_t1_batch, delta_t2_batch
from .permutations import make_stream, sample_uniform_batch
from .statistics import (
    StatKind,
    mean_t1,
    mean_t2,
    mean_t3,
    t1_batch,
    t2_batch,
    t3_batch,
    y_batch,
)

__all__ = [
    "BLOCK",
    "CONFIDENCE",
    "TailEstimate",
    "PairMoments",
    "clopper_pearson",
    "estimate_tail",
    "estimate_pair_moments",
    "closed_form_mean",
]

BLOCK = 1 << 15
CONFIDENCE = 0.99


def clopper_pearson(hits, samples: int, confidence: float = CONFIDENCE):
    """Exact two-sided binomial interval; vectorised over ``hits``."""
    hits = np.asarray(hits)
    alpha = 1 - confidence
    with np.errstate(all="ignore"):
        lo = stats.beta.ppf(alpha / 2, hits, samples - hits + 1)
        hi = stats.beta.ppf(1 - alpha / 2, hits + 1, samples - hits)
    lo = np.where(hits == 0, 0.0, lo)
    hi = np.where(hits == samples, 1.0, hi)
    return lo, hi


def closed_form_mean(a, kind: StatKind) -> float:
    kind = StatKind(kind)
    return {StatKind.T1: mean_t1, StatKind.T2: mean_t2, StatKind.T3: mean_t3}[kind](a)


@dataclass(frozen=True)
class TailEstimate:
    t_grid: np.ndarray
    hits: np.ndarray
    samples: int
    seed: int
    center: float
    point: np.ndarray = field(init=False)
    ci_low: np.ndarray = field(init=False)
    ci_high: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "point", self.hits / self.samples)
        lo, hi = clopper_pearson(self.hits, self.samples)
        object.__setattr__(self, "ci_low", lo)
        object.__setattr__(self, "ci_high", hi)

    def meta(self) -> dict:
        return {"seed": self.seed, "samples": self.samples, "center": self.center}

    def rows(self):
        for t, p, lo, hi in zip(self.t_grid, self.point, self.ci_low, self.ci_high):
            yield float(t), float(p), float(lo), float(hi)

    def to_csv(self) -> str:
        """CSV with a leading ``# {json metadata}`` line."""
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.meta()) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "point", "ci_low", "ci_high"])
        for row in self.rows():
            w.writerow([repr(x) for x in row])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "meta": self.meta(),
            "rows": [dict(zip(("t", "point", "ci_low", "ci_high"), r)) for r in self.rows()],
        }


def _blocks(samples: int):
    return [(k, min(BLOCK, samples - k * BLOCK)) for k in range(math.ceil(samples / BLOCK))]


def _run_blocks(fn, samples: int, threads: int):
    blocks = _blocks(samples)
    if threads <= 1 or len(blocks) == 1:
        return [fn(k, m) for k, m in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda km: fn(*km), blocks))


def _draw_values(a, kind: StatKind, m: int, rng: np.random.Generator) -> np.ndarray:
    sig = sample_uniform_batch(a.n, m, rng)
    if kind is StatKind.T3:
        return t3_batch(a, sig)
    if kind is StatKind.T1:
        return t1_batch(a, sig)
    pi = sample_uniform_batch(a.n, m, rng)
    return t2_batch(a, sig, pi)


def _check_kind(a, kind) -> StatKind:
    kind = StatKind(kind)
    expected = Array2 if kind is StatKind.T3 else Array3
    if not isinstance(a, expected):
        raise ValueError(f"{kind.name} needs an {expected.__name__}")
    return kind


def estimate_tail(a, kind, t_grid, samples: int, seed: int, threads: int = 1) -> TailEstimate:
    """Empirical P(|T - E[T]| >= t) on ``t_grid`` with 99% Clopper-Pearson intervals."""
    kind = _check_kind(a, kind)
    grid = np.asarray(t_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d sequence")
    if np.any(grid < 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("t_grid must be non-negative and strictly ascending")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    center = closed_form_mean(a, kind)

    def block(k, m):
        dev = np.abs(_draw_values(a, kind, m, make_stream(seed, k)) - center)
        dev.sort()
        # count of dev >= t for each t
        return m - np.searchsorted(dev, grid, side="left")

    hits = np.sum(_run_blocks(block, samples, threads), axis=0).astype(np.int64)
    return TailEstimate(grid, hits, samples, seed, center)


@dataclass(frozen=True)
class PairMoments:
    """Empirical moments of delta = T - T' over fresh (state, move) draws.

    ``drift_mean``/``drift_se`` summarise the exact per-state drift
    E[delta | state] over the sampled states. ``bound_abs``/``bound_sq`` are
    the sampled-state averages of the closed-form upper bounds on E[|delta|]
    and E[delta^2] (T1 has no first-moment bound, so ``bound_abs`` is None).
    """

    samples: int
    mean_abs_delta: float
    se_abs_delta: float
    mean_delta_sq: float
    se_delta_sq: float
    mean_delta: float
    se_delta: float
    drift_mean: float
    drift_se: float
    bound_abs: float | None
    bound_sq: float

    @property
    def drift_by_state_summary(self) -> tuple[float, float]:
        return self.drift_mean, self.drift_se


def _pair_block(a: Array3, kind: StatKind, m: int, rng: np.random.Generator):
    n = a.n
    sig = sample_uniform_batch(n, m, rng)
    if kind is StatKind.T1:
        i1 = rng.integers(0, n, size=m)
        i2 = rng.integers(0, n, size=m)
        delta = delta_t1_batch(a, sig, i1, i2)
        mu = mean_t1(a)
        tv = t1_batch(a, sig)
        drift = 2 / n * (tv - mu)
        b_abs = None
        b_sq = 4 * (tv + mu)
    else:
        pi = sample_uniform_batch(n, m, rng)
        i1 = rng.integers(0, n, size=m)
        i2 = rng.integers(0, n - 1, size=m)
        i2 += i2 >= i1
        i3 = rng.integers(0, n - 2, size=m)
        lo, hi = np.minimum(i1, i2), np.maximum(i1, i2)
        i3 += i3 >= lo
        i3 += i3 >= hi
        coins = rng.integers(0, 2, size=m)
        delta = delta_t2_batch(a, sig, pi, np.stack([i1, i2, i3], axis=1), coins)
        mu = mean_t2(a)
        tv = t2_batch(a, sig, pi)
        nn = n * (n - 1) * (n - 2)
        drift = (
            3 * (n * n - 3 * n + 3) / nn * (tv - mu)
            - 9 * mu / (n * (n - 2))
            + 3 * y_batch(a, sig, pi) / nn
        )
        k = n / ((n - 1) * (n - 2))
        b_abs = 3 / n * tv + 3 * k * mu
        b_sq = 9 / n * tv + 9 * k * mu
    ad = np.abs(delta)
    sums = [
        ad.sum(), (ad * ad).sum(),
        (delta * delta).sum(), (delta**4).sum(),
        delta.sum(),
        drift.sum(), (drift * drift).sum(),
        0.0 if b_abs is None else b_abs.sum(),
        b_sq.sum(),
    ]
    return np.array(sums)


def _mean_se(s1: float, s2: float, m: int) -> tuple[float, float]:
    mean = float(s1) / m
    var = max(s2 / m - mean * mean, 0.0) * m / max(m - 1, 1)
    return mean, math.sqrt(float(var) / m)


def estimate_pair_moments(a: Array3, kind, samples: int, seed: int, threads: int = 1) -> PairMoments:
    kind = StatKind(kind)
    if kind is StatKind.T3 or not isinstance(a, Array3):
        raise ValueError("pair moments are defined for T1 and T2 on an Array3")
    if kind is StatKind.T2 and a.n < 3:
        raise ValueError("the T2 move needs n >= 3")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    parts = _run_blocks(lambda k, m: _pair_block(a, kind, m, make_stream(seed, k)), samples, threads)
    tot = np.zeros(9)
    for p in parts:
        tot += p
    m = samples
    abs_mean, abs_se = _mean_se(tot[0], tot[1], m)
    sq_mean, sq_se = _mean_se(tot[2], tot[3], m)
    d_mean, d_se = _mean_se(tot[4], tot[2], m)
    dr_mean, dr_se = _mean_se(tot[5], tot[6], m)
    return PairMoments(
        samples=m,
        mean_abs_delta=abs_mean,
        se_abs_delta=abs_se,
        mean_delta_sq=sq_mean,
        se_delta_sq=sq_se,
        mean_delta=d_mean,
        se_delta=d_se,
        drift_mean=dr_mean,
        drift_se=dr_se,
        bound_abs=None if kind is StatKind.T1 else float(tot[7]) / m,
        bound_sq=float(tot[8]) / m,
    )
