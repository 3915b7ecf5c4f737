"""
Families whose maximal divergence is log 2
==========================================

Every family with nonzero normal space has max D >= log 2. Reaching
equality forces dimension at least ceil(N/2) - 1; at that dimension the
states pair up into coparallel classes, with one triple allowed when N is
odd.
"""

import numpy as np

from expfam import (check_log2_structure, coparallel_classes, dbar, direct_sum,
                    local_maximizers, mixture_decomposition, partition_family,
                    three_state_family, unique_log2_family_N3)

# on three states, every normal direction u has one family with max D = log 2
for u in (["1/2", "1/2", -1], ["1/3", "2/3", -1], [2, -5, 3]):
    f = unique_log2_family_N3(u)
    v = [float(q) for q in f.normal_basis[0]]
    print(u, "nu =", np.round(f.nu, 4), "max D =", round(local_maximizers(f).global_estimate, 9),
          "Dbar =", dbar(f, v))

# other reference measures on the same normal space do worse
for mu in ("1/2", "3/5", "4/5"):
    f = three_state_family(["1/2", "1/2", -1], mu)
    print("mu", mu, "max D", round(local_maximizers(f).global_estimate, 6))

pairs = partition_family([[0, 1], [2, 3], [4, 5]])
print(check_log2_structure(pairs).to_json())

odd = direct_sum(partition_family([[0, 1]]), unique_log2_family_N3(["1/2", "1/2", -1]))
print(coparallel_classes(odd))
for states, sub in mixture_decomposition(odd):
    print("component", states, sub)
print(check_log2_structure(odd).to_json())
