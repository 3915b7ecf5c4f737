"""Circuits of the normal space and what follows from them.

Circuits are the minimal supports of nonzero normal vectors. They give the
binomial equations describing the closure of a family. Their incidence
decides how the family splits into a mixture of smaller families.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from . import exact
from .errors import NotACoparallelClass, NotInNormalSpace, StateSpaceTooLarge, ZeroAtState

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class CircuitVector:
    """Primitive integer normal vector with minimal support."""

    support: tuple
    entries: tuple

    @classmethod
    def from_vector(cls, v):
        v = exact.primitive(v)
        return cls(tuple(i for i, q in enumerate(v) if q != 0), tuple(v))

    @property
    def plus(self):
        return tuple(max(q, 0) for q in self.entries)

    @property
    def minus(self):
        return tuple(max(-q, 0) for q in self.entries)

    def as_array(self):
        return np.array([float(q) for q in self.entries])

    def to_json(self):
        return {"support": list(self.support),
                "vector": [exact.fraction_to_str(q) for q in self.entries]}


@dataclass(frozen=True)
class CircuitBasis:
    circuits: tuple

    def __len__(self):
        return len(self.circuits)

    def __iter__(self):
        return iter(self.circuits)

    @property
    def supports(self):
        return [c.support for c in self.circuits]

    def matrix(self):
        """Float matrix with one circuit per row."""
        if not self.circuits:
            return np.zeros((0, 0))
        return np.array([c.as_array() for c in self.circuits])

    def to_json(self):
        return [c.to_json() for c in self.circuits]


@dataclass(frozen=True)
class CoparallelPartition:
    classes: tuple
    loops: tuple


def _ext_rows(family):
    return [list(r) for r in family.extended]


def circuit_basis(family, budget=DEFAULT_BUDGET):
    """All circuits, found by scanning supports in increasing size.

    A support ``S`` is a circuit when the extended statistics restricted to
    ``S`` have a one-dimensional kernel whose generator is nonzero on all of
    ``S``; this also certifies that every proper subset is independent.
    """
    n = family.n_states
    ext = _ext_rows(family)
    r = family.dim + 1
    max_size = min(n, r + 1)
    total = sum(comb(n, k) for k in range(2, max_size + 1))
    if total > budget:
        raise StateSpaceTooLarge(
            f"{total} candidate supports exceed the budget of {budget}")
    if not family.normal_basis:
        return CircuitBasis(())
    found = []
    found_sets = []
    for size in range(2, max_size + 1):
        for S in combinations(range(n), size):
            Sset = frozenset(S)
            # a circuit never contains a smaller circuit
            if any(c <= Sset for c in found_sets):
                continue
            sub = exact.columns(ext, S)
            kernel = exact.nullspace(sub, size)
            if len(kernel) != 1 or any(q == 0 for q in kernel[0]):
                continue
            v = [Fraction(0)] * n
            for i, q in zip(S, kernel[0]):
                v[i] = q
            found.append(CircuitVector.from_vector(v))
            found_sets.append(Sset)
    found.sort(key=lambda c: c.support)
    return CircuitBasis(tuple(found))


def in_normal_space(family, u):
    u = exact.as_matrix([u])[0]
    if len(u) != family.n_states:
        return False
    return all(q == 0 for q in exact.matvec(_ext_rows(family), u))


def circuit_through(family, u, x):
    """A circuit vector ``c`` with ``supp(c) <= supp(u)`` and ``c(x) != 0``.

    ``u`` must lie in the normal space exactly.
    """
    u = exact.as_matrix([u])[0]
    if not in_normal_space(family, u):
        raise NotInNormalSpace("u is not in the normal space")
    if u[x] == 0:
        raise ZeroAtState(f"u vanishes at state {x}")
    ext = _ext_rows(family)
    support = [i for i, q in enumerate(u) if q != 0]
    # shrink the support greedily while a kernel vector nonzero at x survives
    current = list(u)
    changed = True
    while changed:
        changed = False
        support = [i for i, q in enumerate(current) if q != 0]
        for y in support:
            if y == x:
                continue
            rest = [i for i in support if i != y]
            sub = exact.columns(ext, rest)
            for k in exact.nullspace(sub, len(rest)):
                if k[rest.index(x)] != 0:
                    current = [Fraction(0)] * len(u)
                    for i, q in zip(rest, k):
                        current[i] = q
                    changed = True
                    break
            if changed:
                break
    return CircuitVector.from_vector(current)


def _circuit_monomials(P_over_nu, c):
    """Both sides of the binomial equation of circuit ``c`` in log form.

    Returns ``(log_lhs, log_rhs)`` with ``-inf`` for a vanishing monomial.
    """
    sides = []
    for part in (c.plus, c.minus):
        total = 0.0
        for x, e in enumerate(part):
            if e == 0:
                continue
            if P_over_nu[x] <= 0:
                total = -np.inf
                break
            total += float(e) * np.log(P_over_nu[x])
        sides.append(total)
    return tuple(sides)


@dataclass
class MembershipReport:
    member: bool
    residuals: list
    tol: float

    def __bool__(self):
        return self.member


def closure_membership(family, P, tol=1e-9, basis=None):
    """Test the binomial circuit equations for ``P``.

    A monomial containing a zero probability with positive exponent is zero.
    Residuals are ``|log lhs - log rhs|`` when both sides are positive,
    ``0`` for two vanishing sides and ``inf`` for a zero/nonzero mismatch.
    """
    P = np.asarray(P, dtype=float)
    if basis is None:
        basis = circuit_basis(family)
    ratio = np.where(P > 0, P, 0.0) / family.nu
    residuals = []
    for c in basis:
        lhs, rhs = _circuit_monomials(ratio, c)
        if np.isinf(lhs) and np.isinf(rhs):
            res = 0.0
        elif np.isinf(lhs) or np.isinf(rhs):
            res = np.inf
        else:
            res = abs(lhs - rhs)
        residuals.append({"support": list(c.support), "residual": res})
    member = all(r["residual"] <= tol for r in residuals)
    return MembershipReport(member, residuals, tol)


def _incidence(basis, n):
    return [frozenset(i for i, c in enumerate(basis) if x in c.support)
            for x in range(n)]


def coparallel_classes(family, basis=None):
    """States grouped by the set of circuits that contain them."""
    if basis is None:
        basis = circuit_basis(family)
    n = family.n_states
    inc = _incidence(basis.circuits, n)
    groups = {}
    loops = []
    for x in range(n):
        if not inc[x]:
            loops.append(x)
        else:
            groups.setdefault(inc[x], []).append(x)
    classes = sorted(tuple(g) for g in groups.values())
    return CoparallelPartition(tuple(classes), tuple(loops))


def rank_of_class(family, states, basis=None):
    """Rank of the circuit matrix restricted to a coparallel class."""
    if basis is None:
        basis = circuit_basis(family)
    states = tuple(sorted(states))
    if states not in coparallel_classes(family, basis).classes:
        raise NotACoparallelClass(f"{list(states)} is not a coparallel class")
    rows = [[c.entries[x] for x in states] for c in basis]
    return exact.rank(rows)


def connected_components(family, basis=None):
    """Connected components of the matroid; loops are singletons."""
    if basis is None:
        basis = circuit_basis(family)
    n = family.n_states
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in basis:
        s = c.support
        for y in s[1:]:
            a, b = find(s[0]), find(y)
            if a != b:
                parent[max(a, b)] = min(a, b)
    comps = {}
    for x in range(n):
        comps.setdefault(find(x), []).append(x)
    return sorted(tuple(v) for v in comps.values())


def mixture_decomposition(family, basis=None):
    """``[(states, induced_family), ...]`` over the matroid's components."""
    return [(states, family.restrict(states))
            for states in connected_components(family, basis)]


def brute_force_circuits(family):
    """Inclusion-minimal dependent column sets, by scanning all ``2^N`` subsets.

    Independent of :func:`circuit_basis`: dependence is decided by a rank
    comparison and minimality by comparing against every smaller dependent
    set. Intended for small ``N`` only.
    """
    n = family.n_states
    ext = _ext_rows(family)
    dependent = []
    for size in range(1, n + 1):
        for S in combinations(range(n), size):
            if exact.rank(exact.columns(ext, S)) < size:
                dependent.append(frozenset(S))
    minimal = [S for S in dependent if not any(T < S for T in dependent)]
    return sorted(tuple(sorted(S)) for S in minimal)
