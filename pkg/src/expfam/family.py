"""Exponential families on a finite state space.

A family is stored as a strictly positive reference measure ``nu`` plus an
exact rational statistics matrix ``A`` (one row per statistic, one column
per state). The normal space and everything combinatorial
is derived exactly from ``A``; densities and projections use floats.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import numbers

import numpy as np
from scipy.optimize import linprog
from scipy.special import logsumexp

from . import exact
from .errors import DimensionMismatch, NonPositiveReference
from .partition import Partition

PROB_TOL = 1e-12


@dataclass(frozen=True)
class StateSpace:
    labels: tuple

    def __init__(self, labels):
        if isinstance(labels, numbers.Integral):
            labels = range(labels)
        labels = tuple(str(x) for x in labels)
        if not labels:
            raise ValueError("a state space needs at least one state")
        if len(set(labels)) != len(labels):
            raise ValueError("state labels must be unique")
        object.__setattr__(self, "labels", labels)

    @property
    def size(self):
        return len(self.labels)

    def index(self, label):
        return self.labels.index(str(label))

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class ExponentialFamily:
    """Reference measure plus sufficient statistics.

    Attributes
    ----------
    space : StateSpace
    nu : ndarray
        Strictly positive reference measure (read-only).
    stats : tuple of tuple of Fraction
        The ``h x N`` sufficient statistics.
    """

    space: StateSpace
    nu: np.ndarray
    stats: tuple
    extended: tuple = field(init=False, repr=False)
    dim: int = field(init=False)
    normal_basis: tuple = field(init=False, repr=False)

    def __post_init__(self):
        n = self.space.size
        ones = tuple(Fraction(1) for _ in range(n))
        ext = tuple(self.stats) + (ones,)
        rank = exact.rank([list(r) for r in ext])
        basis = exact.nullspace([list(r) for r in ext], n)
        object.__setattr__(self, "extended", ext)
        object.__setattr__(self, "dim", rank - 1)
        object.__setattr__(self, "normal_basis",
                           tuple(tuple(exact.primitive(v)) for v in basis))

    @property
    def n_states(self):
        return self.space.size

    @property
    def h(self):
        return len(self.stats)

    @property
    def A(self):
        """Float copy of the statistics, shape ``(h, N)``."""
        if not self.stats:
            return np.zeros((0, self.n_states))
        return np.array([[float(q) for q in row] for row in self.stats])

    @property
    def A_ext(self):
        return np.array([[float(q) for q in row] for row in self.extended])

    def column(self, x):
        return tuple(row[x] for row in self.stats)

    @property
    def normal_matrix(self):
        """Float matrix whose rows are the exact normal basis, ``(N-1-dim, N)``."""
        if not self.normal_basis:
            return np.zeros((0, self.n_states))
        return np.array([[float(q) for q in v] for v in self.normal_basis])

    def normal_projector(self):
        """Orthonormal basis of the normal space as columns, ``(N, codim)``."""
        B = self.normal_matrix.T
        if B.shape[1] == 0:
            return B
        q, _ = np.linalg.qr(B)
        return q

    @property
    def codim(self):
        return len(self.normal_basis)

    def restrict(self, states):
        """Induced family on a subset of states (restricted nu and columns)."""
        states = list(states)
        space = StateSpace([self.space.labels[x] for x in states])
        stats = tuple(tuple(row[x] for x in states) for row in self.stats)
        return ExponentialFamily(space, self.nu[states].copy(), stats)

    def same_tangent_space(self, other):
        """True if both families have the same extended tangent space.

        This is equality of row spans of the extended statistics; reference
        measures are not compared.
        """
        if self.n_states != other.n_states:
            return False
        r1 = exact.rank([list(r) for r in self.extended])
        r2 = exact.rank([list(r) for r in other.extended])
        both = exact.rank([list(r) for r in self.extended + other.extended])
        return r1 == r2 == both

    def __repr__(self):
        return (f"ExponentialFamily(N={self.n_states}, h={self.h}, "
                f"dim={self.dim})")


def build_family(space, nu, stats):
    """Validate inputs and construct an :class:`ExponentialFamily`.

    ``space`` may be a StateSpace or anything StateSpace accepts; ``stats`` is
    any nested sequence of numbers or ``"p/q"`` strings.
    """
    if not isinstance(space, StateSpace):
        space = StateSpace(space)
    nu = np.array([float(exact.to_fraction(v)) for v in nu], dtype=float)
    if nu.shape != (space.size,):
        raise DimensionMismatch(
            f"reference measure has {nu.size} entries, expected {space.size}")
    if not np.all(np.isfinite(nu)) or np.any(nu <= 0):
        raise NonPositiveReference("reference measure must be strictly positive")
    rows = exact.as_matrix(stats)
    for row in rows:
        if len(row) != space.size:
            raise DimensionMismatch(
                f"statistics row has {len(row)} columns, expected {space.size}")
    nu.setflags(write=False)
    return ExponentialFamily(space, nu, tuple(tuple(r) for r in rows))


def family_from_normal_space(nu, normal_vectors, labels=None):
    """Family with reference measure ``nu`` whose normal space is spanned by
    the given sum-zero vectors; statistics are an exact basis of the
    orthogonal complement."""
    vecs = exact.as_matrix(normal_vectors)
    n = len(nu)
    for v in vecs:
        if sum(v) != 0:
            raise ValueError("normal vectors must sum to zero")
    comp = exact.nullspace(vecs, n) if vecs else [
        [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    stats = [exact.primitive(v) for v in comp]
    return build_family(labels if labels is not None else n, nu, stats)


def density(family, theta):
    """``P(x) = nu(x) exp(theta . A_x) / Z`` computed with a max shift."""
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.size != family.h:
        raise DimensionMismatch(f"theta has {theta.size} entries, expected {family.h}")
    logits = np.log(family.nu)
    if family.h:
        logits = logits + theta @ family.A
    return np.exp(logits - logsumexp(logits))


def moment_map(family, P):
    return family.A @ np.asarray(P, dtype=float)


def is_probability(P, tol=PROB_TOL):
    P = np.asarray(P, dtype=float)
    return bool(np.all(np.isfinite(P)) and np.all(P >= -tol)
                and abs(P.sum() - 1.0) <= tol * max(1, P.size))


@dataclass(frozen=True)
class ConvexSupport:
    vertices: frozenset
    method: str

    def __contains__(self, x):
        return x in self.vertices

    def __len__(self):
        return len(self.vertices)


EXACT_MAX_DENOMINATOR = 10**6
FLOAT_LP_TOL = 1e-9


def _hull_search(target, points):
    """Exact Caratheodory search: is ``target`` a convex combination of ``points``?"""
    h = len(target)
    lifted = [list(p) + [Fraction(1)] for p in points]
    rhs = list(target) + [Fraction(1)]
    r = exact.rank(lifted)
    for size in range(1, min(r, len(points)) + 1):
        for idx in combinations(range(len(points)), size):
            cols = [[lifted[i][k] for i in idx] for k in range(h + 1)]
            if exact.rank(cols) < size:
                continue
            lam = exact.solve(cols, rhs)
            if lam is not None and all(v >= 0 for v in lam):
                return True
    return False


def _combination_certificate(target, points, weights):
    """Exact convex weights on the support of a float LP solution, if any."""
    idx = [i for i, w in enumerate(weights) if w > 1e-12]
    h = len(target)
    cols = [[points[i][k] for i in idx] for k in range(h)] + [[Fraction(1)] * len(idx)]
    lam = exact.solve(cols, list(target) + [Fraction(1)])
    return lam is not None and all(v >= 0 for v in lam)


def _separation_certificate(target, points):
    """Rational hyperplane with ``w.target - b >= 1`` and ``w.p - b <= -1``."""
    h = len(target)
    P = np.array([[float(q) for q in p] for p in points])
    t = np.array([float(q) for q in target])
    A_ub = np.vstack([np.hstack([P, -np.ones((len(points), 1))]),
                      np.append(-t, 1.0)[None, :]])
    b_ub = -np.ones(len(points) + 1)
    res = linprog(np.zeros(h + 1), A_ub=A_ub, b_ub=b_ub, bounds=(-1e6, 1e6),
                  method="highs")
    if res.status != 0:
        return False
    w = [Fraction(v).limit_denominator(10**6) for v in res.x]
    b = w.pop()

    def side(p):
        return sum((wi * pi for wi, pi in zip(w, p)), Fraction(0)) - b

    return side(target) > 0 and all(side(p) < 0 for p in points)


def _in_hull_exact(target, points):
    """Exact hull membership.

    A float LP proposes the answer, which is then certified in rational
    arithmetic: by exact weights on the LP support, or by a rational
    separating hyperplane. Without a certificate the subset search decides.
    """
    if not points:
        return False
    P = np.array([[float(q) for q in p] for p in points]).T
    A_eq = np.vstack([P, np.ones(P.shape[1])])
    b_eq = np.append(np.array([float(q) for q in target]), 1.0)
    res = linprog(np.zeros(P.shape[1]), A_eq=A_eq, b_eq=b_eq,
                  bounds=(0, None), method="highs")
    if res.status == 0 and _combination_certificate(target, points, res.x):
        return True
    if res.status != 0 and _separation_certificate(target, points):
        return False
    return _hull_search(target, points)


def _in_hull_float(target, points, tol=FLOAT_LP_TOL):
    if not points:
        return False
    P = np.array([[float(q) for q in p] for p in points]).T
    A_eq = np.vstack([P, np.ones(P.shape[1])])
    b_eq = np.append(np.array([float(q) for q in target]), 1.0)
    res = linprog(np.zeros(P.shape[1]), A_eq=A_eq, b_eq=b_eq,
                  bounds=(0, None), method="highs")
    if res.status != 0:
        return False
    return bool(np.max(np.abs(A_eq @ res.x - b_eq)) <= tol)


def convex_support_vertices(family, method="auto"):
    """States whose statistics column is a vertex of the convex support.

    ``method`` is ``"exact"``, ``"float"`` or ``"auto"``. The exact path
    certifies every answer in rational arithmetic; auto uses it whenever all
    denominators are at most ``EXACT_MAX_DENOMINATOR``.
    """
    cols = [family.column(x) for x in range(family.n_states)]
    distinct = sorted(set(cols))
    if method == "auto":
        small = all(q.denominator <= EXACT_MAX_DENOMINATOR for row in family.stats for q in row)
        method = "exact" if small else "float"
    test = _in_hull_exact if method == "exact" else _in_hull_float
    vertex_cols = {c for c in distinct
                   if not test(c, [d for d in distinct if d != c])}
    verts = frozenset(x for x, c in enumerate(cols) if c in vertex_cols)
    return ConvexSupport(verts, method)


def is_partition_family(family, tol=PROB_TOL):
    """The partition whose blocks are the fibres of ``x -> A_x``, if the family
    is a partition exponential family; ``None`` otherwise."""
    nu = family.nu
    if np.max(np.abs(nu - nu[0])) > tol * nu[0]:
        return None
    cols = [family.column(x) for x in range(family.n_states)]
    distinct = sorted(set(cols))
    lifted = [list(c) + [Fraction(1)] for c in distinct]
    if exact.rank(lifted) != len(distinct):
        return None
    # affinely independent points are automatically all vertices
    blocks = {}
    for x, c in enumerate(cols):
        blocks.setdefault(c, []).append(x)
    return Partition(blocks.values(), family.n_states)
