"""
Scanning the smallest worst-case divergence
===========================================

For k-dimensional families containing the uniform distribution on N
states, the best known value is log ceil(N / (k + 1)), attained by
partition models. This script samples random families and compares.
The output is empirical evidence only.
"""

import numpy as np

from expfam import scan_conjecture

print(f"{'N':>2} {'k':>2} {'conjectured':>12} {'min sampled':>12} {'rechecks':>8}")
for N in range(3, 7):
    for k in range(1, N - 1):
        r = scan_conjecture(N, k, n_random_families=40, seed=N * 10 + k)
        print(f"{N:>2} {k:>2} {r.conjectured:12.6f} {r.min_value:12.6f} {len(r.rechecks):>8}")

r = scan_conjecture(5, 2, 40, seed=1)
values = np.array(r.values)
print("N=5 k=2 sample quantiles", np.round(np.quantile(values, [0, 0.25, 0.5, 0.75, 1]), 4))
print(r.label)
