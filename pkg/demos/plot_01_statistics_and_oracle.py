"""
Permutation statistics and their exact distributions
=====================================================

"""

# Build a small 3-d coefficient array and a 2-d one from the same generator
import numpy as np
from permconc import arrays, statistics, oracle

a3 = arrays.make_uniform_random(5, seed=1, dims=3)
a2 = arrays.make_footrule(3)

# T1, T2 and T3 for a single state. Permutations are 1-based at the API edge.
from permconc.permutations import Permutation
sigma = Permutation([2, 3, 1, 5, 4])
pi = Permutation([1, 2, 3, 4, 5])
print("T1 =", statistics.t1(a3, sigma))
print("T2 =", statistics.t2(a3, sigma, pi))

# Exact pmf of T3 for the footrule array at n=3
dist = oracle.exact_distribution(a2, "t3")
print("footrule T3 outcomes:", dist.outcomes)
print("mean", dist.mean(), "closed form", statistics.mean_t3(a2))

# The T1 pmf over all of S_5 agrees with the closed-form mean
d1 = oracle.exact_distribution(a3, "t1")
print("T1 mean exact %.15f  closed form %.15f" % (d1.mean(), statistics.mean_t1(a3)))

# Exact tail probabilities are Fractions of n!
center = statistics.mean_t1(a3)
for t in (0.5, 1.0, 2.0):
    print("P(|T1 - E T1| >= %.1f) =" % t, oracle.exact_tail(d1, center, t))
