"""
Partition models
================

A partition model contains the distributions that are uniform on every
block. Projection averages over blocks, the maximal divergence is the log
of the largest block size, and the maximisers put a point mass inside
largest blocks only.
"""

import numpy as np

from expfam import (Partition, caratheodory_witness, equality_case, local_maximizers,
                    partition_divergence, partition_family, partition_maximizers,
                    partition_project, ri_project)

part = Partition([[0, 1], [2, 3, 4], [5]])
family = partition_family(part)
print(part, "coarseness", part.coarseness, "dim", family.dim)

P = np.array([0.1, 0.3, 0.05, 0.05, 0.3, 0.2])
print("closed form ", np.round(partition_project(part, P), 6))
print("Newton path ", np.round(ri_project(family, P).point, 6))
print("divergence  ", partition_divergence(part, P), ri_project(family, P).divergence)

report = local_maximizers(family, n_starts=32)
print("max D", report.global_estimate, "log c", np.log(part.coarseness))
pred = partition_maximizers(part)
for c in report.global_maximizers():
    print("  maximiser", np.round(c.P, 6), "satisfies the characterisation:", pred(c.P))

# a maximiser with a prescribed projection on the largest block
Q = np.array([0, 0, 1 / 3, 1 / 3, 1 / 3, 0])
P = pred.from_projection(Q)
print(P, ri_project(family, P).point.round(6))

# the Caratheodory witness is tight for homogeneous partitions only
for blocks in ([[0, 1, 2], [3, 4, 5]], [[0, 1, 2], [3, 4]]):
    f = partition_family(blocks)
    w = caratheodory_witness(f)
    print(blocks, f"witness D = {w.recomputed:.6f}, bound = {w.bound:.6f},", equality_case(f))
