"""Concentration of three-dimensional permutation statistics.

Exact small-n oracles, exchangeable-pair moves, Bernstein-type tail bounds
and Monte Carlo tail estimates for

    T1 = sum_i sum_j a[i, j, sigma(i)]
    T2 = sum_i a[i, sigma(i), pi(i)]
    T3 = sum_i a[i, sigma(i)]

with sigma, pi independent uniform permutations and entries of ``a`` in [0, 1].
"""

from .arrays import (
    Array2,
    Array3,
    ValidationError,
    load_array,
    make_constant,
    make_footrule,
    make_product,
    make_uniform_random,
    store_array,
)
from .bounds import BoundSpec, bernstein_lemma, bound_curve, bound_t1, bound_t2, bound_t3
from .montecarlo import TailEstimate, estimate_pair_moments, estimate_tail
from .oracle import ExactDistribution, exact_distribution, exact_tail
from .permutations import Permutation, compose, make_stream, sample_uniform
from .statistics import StatKind, mean_t1, mean_t2, mean_t3, t1, t2, t3, y_stat

__version__ = "0.1.0"
