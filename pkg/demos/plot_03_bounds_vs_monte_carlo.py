"""
Tail bounds against Monte Carlo estimates
=========================================

"""

import numpy as np
from permconc import arrays, bounds, montecarlo, statistics

n = 50
a3 = arrays.make_uniform_random(n, seed=7, dims=3)
a2 = arrays.make_uniform_random(n, seed=8, dims=2)

# 2e5 draws is enough to see the shape; the acceptance suite uses 1e6
samples = 200_000

grid = np.arange(0, 40.01, 4.0)
est = montecarlo.estimate_tail(a2, "t3", grid, samples, seed=1)
m3 = statistics.mean_t3(a2)
print(" t     P_hat     ci_high   bound T3")
for (t, p, lo, hi) in est.rows():
    print("%4.1f  %.5f  %.5f  %.5f" % (t, p, hi, bounds.bound_t3(t, m3)))

# T2 has two bound variants; finite_n keeps every O(1/n) constant
m2 = statistics.mean_t2(a3)
est = montecarlo.estimate_tail(a3, "t2", grid, samples, seed=2)
print("\n t     P_hat     nominal   finite_n")
for (t, p, lo, hi) in est.rows():
    print("%4.1f  %.5f  %.5f  %.5f" % (t, p, bounds.bound_t2(t, n, m2),
                                       bounds.bound_t2(t, n, m2, "finite_n")))

# Moments of delta = T2 - T2' sit below their closed-form bounds
pm = montecarlo.estimate_pair_moments(a3, "t2", 100_000, seed=3)
print("\nE|delta| %.4f <= %.4f" % (pm.mean_abs_delta, pm.bound_abs))
print("E delta^2 %.4f <= %.4f" % (pm.mean_delta_sq, pm.bound_sq))
