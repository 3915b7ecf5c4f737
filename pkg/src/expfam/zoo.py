"""Constructors for the standard families.

Product state spaces are indexed row-major with factor 1 varying slowest,
so state ``(x_1, ..., x_n)`` of a space with cardinalities ``(N_1, ..., N_n)``
sits at ``np.ravel_multi_index(x, N)``. Factors are numbered from 1.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod

import numpy as np

from . import exact
from .errors import BadGenerator, DegenerateSupport, NotSumZero, ZeroVector
from .family import StateSpace, build_family, family_from_normal_space
from .partition import Partition


def partition_family(partition, space=None):
    """Uniform reference measure with the block indicators as statistics."""
    if not isinstance(partition, Partition):
        partition = Partition(partition)
    n = partition.n_states
    if space is None:
        space = StateSpace(n)
    elif not isinstance(space, StateSpace):
        space = StateSpace(space)
    if space.size != n:
        raise ValueError(f"partition covers {n} states, space has {space.size}")
    stats = [[int(x in b) for x in range(n)] for b in partition.blocks]
    return build_family(space, [1] * n, stats)


@dataclass(frozen=True)
class HierarchicalSpec:
    """Cardinalities ``(N_1, ..., N_n)`` and generators, subsets of ``{1..n}``."""

    cardinalities: tuple
    generators: tuple

    def __init__(self, cardinalities, generators):
        cards = tuple(int(c) for c in cardinalities)
        if not cards or any(c < 1 for c in cards):
            raise ValueError("cardinalities must be positive integers")
        gens = []
        for g in generators:
            g = tuple(sorted({int(i) for i in g}))
            if any(i < 1 or i > len(cards) for i in g):
                raise BadGenerator(
                    f"generator {list(g)} is not a subset of 1..{len(cards)}")
            gens.append(g)
        object.__setattr__(self, "cardinalities", cards)
        object.__setattr__(self, "generators", tuple(gens))

    @property
    def n_factors(self):
        return len(self.cardinalities)

    @property
    def n_states(self):
        return prod(self.cardinalities)

    def states(self):
        return list(product(*(range(c) for c in self.cardinalities)))

    def labels(self):
        sep = "" if max(self.cardinalities) <= 10 else ","
        return [sep.join(str(v) for v in x) for x in self.states()]


def hierarchical_family(spec, generators=None):
    """Family with one 0-1 indicator row per generator and configuration.

    Accepts a :class:`HierarchicalSpec` or ``(cardinalities, generators)``.
    The statistics keep one redundant indicator per generator; ranks are
    handled by the family itself.
    """
    if not isinstance(spec, HierarchicalSpec):
        spec = HierarchicalSpec(spec, generators)
    states = spec.states()
    rows = []
    for S in spec.generators:
        idx = [i - 1 for i in S]
        for config in product(*(range(spec.cardinalities[i]) for i in idx)):
            rows.append([int(all(x[i] == c for i, c in zip(idx, config)))
                         for x in states])
    return build_family(spec.labels(), [1] * len(states), rows)


def grouping_family(K, cardinalities):
    """Partition model of the fibres of the coordinates in ``K``.

    Returns ``(family, partition)``; blocks are homogeneous with coarseness
    ``prod_{i not in K} N_i``.
    """
    spec = HierarchicalSpec(cardinalities, [K])
    idx = [i - 1 for i in spec.generators[0]]
    blocks = {}
    for s, x in enumerate(spec.states()):
        blocks.setdefault(tuple(x[i] for i in idx), []).append(s)
    partition = Partition(blocks.values(), spec.n_states)
    return partition_family(partition, StateSpace(spec.labels())), partition


def marginal_polytope_vertex_count(spec, generators=None):
    """``prod_{i in K} N_i`` with ``K`` the union of the generators."""
    if not isinstance(spec, HierarchicalSpec):
        spec = HierarchicalSpec(spec, generators)
    union = set().union(*spec.generators) if spec.generators else set()
    return prod(spec.cardinalities[i - 1] for i in union)


def _three_state_direction(u):
    """Validate ``u`` and scale it so that ``u+`` sums to 1."""
    u = exact.as_matrix([u])[0]
    if len(u) != 3:
        raise ValueError("u must have three entries")
    if all(q == 0 for q in u):
        raise ZeroVector("u is zero")
    if sum(u) != 0:
        raise NotSumZero(f"u sums to {sum(u)}")
    if any(q == 0 for q in u):
        raise DegenerateSupport("u has a zero entry; the reference measure would vanish there")
    scale = sum(q for q in u if q > 0)
    return [q / scale for q in u]


def three_state_family(u, mu=Fraction(1, 2)):
    """One-dimensional family on three states with normal space ``R u`` and
    reference measure ``mu u+ + (1 - mu) u-`` (``u`` scaled so ``u+`` sums to 1).

    The projection of ``u+`` and of ``u-`` is this reference measure.
    """
    u = _three_state_direction(u)
    mu = exact.to_fraction(mu)
    if not 0 < mu < 1:
        raise ValueError("mu must lie strictly between 0 and 1")
    nu = [mu * q if q > 0 else (1 - mu) * -q for q in u]
    return family_from_normal_space([exact.fraction_to_str(q) for q in nu], [u])


def unique_log2_family_N3(u):
    """The one-dimensional family on three states with normal space ``R u``
    and ``max D = log 2``: reference measure ``u+ + u-``."""
    u = _three_state_direction(u)
    return family_from_normal_space([exact.fraction_to_str(abs(q)) for q in u], [u])


def direct_sum(*families):
    """Family on the disjoint union of the state spaces whose normal space is
    the direct sum of the normal spaces. Its closure is the set of mixtures
    of the closures."""
    if not families:
        raise ValueError("need at least one family")
    n = sum(f.n_states for f in families)
    nu, labels, normals = [], [], []
    offset = 0
    for i, f in enumerate(families):
        nu.extend(float(v) for v in f.nu)
        labels.extend(f"{i}:{lab}" for lab in f.space.labels)
        for v in f.normal_basis:
            row = [Fraction(0)] * n
            row[offset:offset + f.n_states] = v
            normals.append(row)
        offset += f.n_states
    return family_from_normal_space(nu, normals, labels)


def near_equal_partition(N, n_blocks):
    """Consecutive blocks whose sizes differ by at most one, largest first."""
    q, r = divmod(N, n_blocks)
    sizes = [q + 1] * r + [q] * (n_blocks - r)
    edges = np.cumsum([0] + sizes)
    return Partition([range(edges[i], edges[i + 1]) for i in range(n_blocks)], N)
