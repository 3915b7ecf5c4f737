"""
Divergence from a one-dimensional family on three states
=========================================================

Statistics A = (0, 1, 2) with reference measure nu = (1, 4, 1). The normal
space is spanned by (1, -2, 1), so the boundary set of normal directions
consists of two points and the divergence has exactly two local maximisers.
"""

import numpy as np

from expfam import (build_family, circuit_basis, closure_membership, dbar, density,
                    local_maximizers, one_dim_optimality, psi_family, ri_project)

family = build_family(["0", "1", "2"], [1, 4, 1], [[0, 1, 2]])
print(family, "normal basis", family.normal_basis)

# the family in monomial form: (1, 4 xi, xi^2) / Z
for xi in (0.25, 1.0, 4.0):
    print(f"xi = {xi:5.2f}", np.round(density(family, [np.log(xi)]), 4))

# both candidate maximisers project to nu / 6
for P in ([0, 1, 0], [0.5, 0, 0.5]):
    res = ri_project(family, P)
    print(P, "->", np.round(res.point, 6), f"D = {res.divergence:.6f}")

# the binomial equation P0 P2 = (P1 / 4)^2 describes the closure
print(closure_membership(family, [1 / 6, 2 / 3, 1 / 6]).member,
      closure_membership(family, [0, 1, 0]).member)

# Dbar on the two boundary directions and the relation D = log(1 + exp(Dbar))
for u in ([-0.5, 1, -0.5], [0.5, -1, 0.5]):
    v = dbar(family, u)
    print(u, f"Dbar = {v:+.6f}", f"log(1 + e^Dbar) = {np.logaddexp(0, v):.6f}")

report = local_maximizers(family, n_starts=32, seed=0)
for c in report.local_maxima:
    print("local max", np.round(c.P, 6), f"D = {c.D_value:.9f}", f"gap = {c.duality_gap:.1e}")
print("global", report.global_estimate, "log 3 =", np.log(3))

# Psi maps a maximiser back to its direction
print(np.round(psi_family(family, [0, 1, 0]).u, 12))

# one-dimensional optimality: mu = 2/3 sits inside [e^-D, 1 - e^-D] only for D >= log 3
for D in (np.log(2.5), np.log(3), np.log(4)):
    ok, mu = one_dim_optimality(family, D)
    print(f"D = {D:.4f}: mu = {mu:.4f}, max D_E <= D: {ok}")
print(circuit_basis(family).to_json())
