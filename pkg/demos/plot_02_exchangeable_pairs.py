"""
Exchangeable pairs and their drift
==================================

"""

# The T1 move composes sigma with a random transposition; the T2 move
# applies a 3-cycle to sigma and its inverse to pi.
import numpy as np
from permconc import arrays, exchange, oracle, statistics

a = arrays.make_uniform_random(4, seed=3, dims=3)
n = a.n

# Exchangeability is checked exactly over every (state, move)
print("T1 asymmetry:", oracle.verify_exchangeable_t1(a))
print("T2 asymmetry:", oracle.verify_exchangeable_t2(a))
# A broken move (sigma' is no longer a permutation) is caught
print("half-cycle control:", oracle.verify_exchangeable_t2(a, "half-cycle"))

# The T1 drift is linear in T1
mu = statistics.mean_t1(a)
for s in oracle.all_permutations(n)[:5]:
    print("drift %.6f   2/n (T1 - E) %.6f"
          % (exchange.cond_drift_t1(a, s), 2 / n * (statistics.t1(a, s) - mu)))

# The T2 drift carries an extra Y term; the closed form matches enumeration
rng = np.random.default_rng(0)
s, p = rng.permutation(n), rng.permutation(n)
print("T2 drift enumerated", exchange.cond_drift_t2(a, s, p))
print("T2 drift closed form", exchange.drift_t2_closed_form(a, s, p))

# f(T2) stays within the sandwich width of T2 - E[T2]
m2 = statistics.mean_t2(a)
print("f - (T2 - E):", exchange.f_t2_state(a, s, p) - (statistics.t2(a, s, p) - m2),
      " width:", exchange.sandwich_width(n, m2))
