"""Bernstein-type tail bounds for T1, T2, T3.

All bounds go through :func:`log_bernstein_lemma`, which evaluates
``log 2 - t^2 / (2C + 2Bt)``; the public functions exponentiate and clamp
at 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exchange import envelope_eps, sandwich_width

__all__ = [
    "BoundSpec",
    "log_bernstein_lemma",
    "bernstein_lemma",
    "bound_t1",
    "bound_t2",
    "bound_t3",
    "t2_bound_threshold",
    "bound_curve",
    "sweep_t1",
]

LOG2 = math.log(2.0)


def log_bernstein_lemma(t: float, B: float, C: float) -> float:
    if t < 0 or B < 0 or C < 0:
        raise ValueError(f"t, B, C must be non-negative (t={t}, B={B}, C={C})")
    if t == 0:
        return 0.0
    denom = 2 * C + 2 * B * t
    if denom == 0:
        raise ValueError("B and C cannot both be zero when t > 0")
    return min(0.0, LOG2 - t * t / denom)


def bernstein_lemma(t: float, B: float, C: float) -> float:
    """min(1, 2 exp(-t^2 / (2C + 2Bt))) for v <= C + B f."""
    return math.exp(log_bernstein_lemma(t, B, C))


def bound_t3(t: float, mean_t3: float) -> float:
    return bernstein_lemma(t, 1.0, 2.0 * mean_t3)


def bound_t1(t: float, n: int, mean_t1: float) -> float:
    return bernstein_lemma(t, float(n), 2.0 * n * mean_t1)


def t2_bound_threshold(n: int, mean_t2: float, variant: str = "nominal") -> float:
    """t at or below which the T2 bound is vacuous (returned as 1)."""
    if n < 3:
        raise ValueError(f"the T2 bound needs n >= 3, got n={n}")
    if variant == "nominal":
        return 3.0
    if variant == "finite_n":
        return sandwich_width(n, mean_t2)
    raise ValueError(f"unknown variant {variant!r}")


def _log_bound_t2(t: float, n: int, mean_t2: float, variant: str) -> float:
    shift = t2_bound_threshold(n, mean_t2, variant)
    if t < 0:
        raise ValueError("t must be non-negative")
    if t <= shift:
        return 0.0
    s = t - shift
    if variant == "nominal":
        return min(0.0, LOG2 - s * s / (12 * mean_t2 + 18 + 6 * s))
    b = 3 + envelope_eps(n)
    c = b * (2 * mean_t2 + b)
    return log_bernstein_lemma(s, b, c)


def bound_t2(t: float, n: int, mean_t2: float, variant: str = "nominal") -> float:
    """Tail bound for |T2 - E[T2]|.

    ``nominal`` drops every O(1/n) term. ``finite_n`` replaces the shift 3
    by the exact sandwich width and uses B = 3 + eps_n,
    C = B (2 E[T2] + 3 + eps_n) from the finite-n v envelope.
    """
    return math.exp(_log_bound_t2(t, n, mean_t2, variant))


@dataclass(frozen=True)
class BoundSpec:
    kind: str  # "t1" | "t2" | "t3" | "generic"
    n: int = 0
    mean: float = 0.0
    B: float = 0.0
    C: float = 0.0
    variant: str = "nominal"

    def __post_init__(self):
        if self.kind not in ("t1", "t2", "t3", "generic"):
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if self.mean < 0 or self.B < 0 or self.C < 0:
            raise ValueError("mean, B and C must be non-negative")

    def __call__(self, t: float) -> float:
        if self.kind == "t1":
            return bound_t1(t, self.n, self.mean)
        if self.kind == "t2":
            return bound_t2(t, self.n, self.mean, self.variant)
        if self.kind == "t3":
            return bound_t3(t, self.mean)
        return bernstein_lemma(t, self.B, self.C)


def bound_curve(spec: BoundSpec, t_grid) -> list[tuple[float, float]]:
    return [(float(t), spec(float(t))) for t in t_grid]


def sweep_t1(lam: float, n_list, mean_scale: float = 0.5) -> list[dict]:
    """T1 bound at t = n^(1+lam) with E[T1] = mean_scale * n^2.

    ``exponent`` is t^2 / (2n(2E[T1] + t)) and ``ratio`` compares it to
    n^lam / 2, the large-n shape when E[T1] is small next to t.
    """
    rows = []
    for n in n_list:
        t = float(n) ** (1 + lam)
        mean = mean_scale * n * n
        exponent = t * t / (2 * n * (2 * mean + t))
        rows.append(
            {
                "n": int(n),
                "t": t,
                "bound": bound_t1(t, n, mean),
                "exponent": exponent,
                "ratio": exponent / (float(n) ** lam / 2),
            }
        )
    return rows
