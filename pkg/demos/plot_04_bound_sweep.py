"""
How the T1 bound scales with n
==============================

"""

from permconc import bounds

# At t = n^(1+lam) the exponent approaches n^lam / 2 only if E[T1] is
# small next to t. With E[T1] = n^2 / 2 the ratio decays like 1/sqrt(n).
for scale in (0.0, 0.5):
    print("mean_scale =", scale)
    for row in bounds.sweep_t1(0.5, [10, 100, 1_000, 10_000, 100_000], mean_scale=scale):
        print("  n=%7d  bound=%.3e  exponent=%10.3f  ratio=%.4f"
              % (row["n"], row["bound"], row["exponent"], row["ratio"]))
