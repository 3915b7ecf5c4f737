"""Maximising the divergence from an exponential family.

Local maximisers of ``D_E(P) = D(P || P_E)`` correspond to local maximisers
of the homogeneous function ``Dbar(u) = sum u log(|u| / nu)`` on the set of
normal vectors whose positive and negative parts are probability vectors.
At corresponding points ``D_E(u+) = log(1 + exp(Dbar(u)))``.

The search runs a projected subgradient ascent of ``Dbar`` from random
directions, then polishes with the fixed-point map ``u -> Psi_E(u+)``,
which never decreases ``Dbar``, and finally revalidates every candidate
through the primal projection.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import exact
from .circuits import circuit_basis
from .errors import (BudgetExceeded, NotInNormalSpace, PointInClosure,
                     UnreachableTarget, ZeroNormalSpace)
from .projection import fiber_face, ri_project

NORMAL_TOL = 1e-8
MERGE_DIST = 1e-6


def _dbar_raw(u, nu):
    mask = u != 0
    return float(np.sum(u[mask] * (np.log(np.abs(u[mask])) - np.log(nu[mask]))))


def normal_residual(family, u):
    """Max violation of ``A_ext u = 0``, relative to the size of ``u``."""
    u = np.asarray(u, dtype=float)
    scale = max(1.0, float(np.max(np.abs(u))) if u.size else 1.0)
    return float(np.max(np.abs(family.A_ext @ u))) / scale


def dbar(family, u, tol=NORMAL_TOL):
    """``sum_x u(x) log(|u(x)| / nu(x))`` for a normal vector ``u``."""
    u = np.asarray(u, dtype=float)
    if u.shape != (family.n_states,) or normal_residual(family, u) > tol:
        raise NotInNormalSpace("u is not in the normal space")
    return _dbar_raw(u, family.nu)


@dataclass(frozen=True)
class KernelDirection:
    """Normal vector with ``u+`` and ``u-`` both summing to one."""

    u: np.ndarray

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=float)
        s = v[v > 0].sum()
        if s <= 0:
            raise ValueError("vector has no positive part")
        return cls(v / s)

    @property
    def plus(self):
        return np.where(self.u > 0, self.u, 0.0)

    @property
    def minus(self):
        return np.where(self.u < 0, -self.u, 0.0)

    @property
    def support(self):
        return tuple(int(x) for x in np.flatnonzero(self.u))


def psi_plus(u):
    """Positive part of a direction: the kernel distribution."""
    if isinstance(u, KernelDirection):
        return u.plus
    return KernelDirection.from_vector(u).plus


def psi_family(family, P, tol=1e-10, projection=None):
    """``(P - P_E) / (P - P_E)+(X)``."""
    P = np.asarray(P, dtype=float)
    if projection is None:
        projection = ri_project(family, P)
    diff = P - projection.point
    s = diff[diff > 0].sum()
    if projection.divergence <= tol or s <= tol:
        raise PointInClosure("P lies in the closure of the family")
    return KernelDirection(diff / s)


def _normalize(u):
    s = u[u > 0].sum()
    return u / s if s > 0 else u


def _snap(u, B, threshold):
    """Zero coordinates below ``threshold`` and return to the normal space.

    The result is the least-squares projection onto normal vectors that vanish
    on the snapped coordinates, or ``None`` when nothing is left.
    """
    small = np.abs(u) < threshold
    if not np.any(small) or np.all(small):
        return None
    keep = ~small
    # normal vectors vanishing on `small`: kernel of B[small, :]
    Bs = B[small]
    _, s, vt = np.linalg.svd(Bs)
    rank = int(np.sum(s > 1e-10))
    K = vt[rank:].T
    if K.shape[1] == 0:
        return None
    W = B @ K
    coef, *_ = np.linalg.lstsq(W[keep], u[keep], rcond=None)
    v = W @ coef
    v[small] = 0.0
    if v[v > 0].sum() <= 0 or v[v < 0].sum() >= 0:
        return None
    return _normalize(v)


def _ascend(u, B, log_nu, max_iter=400, min_step=1e-13):
    """Projected subgradient ascent of ``Dbar`` on the normalised set.

    ``B`` holds an orthonormal basis of the normal space as columns. The
    subgradient is ``log|u| - log nu`` with 0 on zero coordinates; the part
    ``-Dbar * 1[u > 0]`` accounts for the rescaling ``u+(X) = 1``.
    """
    nu = np.exp(log_nu)
    u = _normalize(u)
    value = _dbar_raw(u, nu)
    step = 0.1
    for _ in range(max_iter):
        nz = u != 0
        g = np.zeros_like(u)
        g[nz] = np.log(np.abs(u[nz])) - log_nu[nz]
        g -= value * (u > 0)
        d = B @ (B.T @ g)
        norm = np.linalg.norm(d)
        if norm < 1e-12:
            break
        d /= norm
        step = min(step * 2.0, 1.0)
        while step >= min_step:
            cand = _normalize(u + step * d)
            cv = _dbar_raw(cand, nu)
            if cv > value + 1e-4 * step * norm * 1e-3:
                break
            step *= 0.5
        else:
            break
        u, value = cand, cv
    return u, value


@dataclass
class Candidate:
    P: np.ndarray
    u: KernelDirection
    D_value: float
    Dbar_value: float
    duality_gap: float
    roundtrip: float

    def to_json(self):
        return {
            "P": [float(v) for v in self.P],
            "u": [float(v) for v in self.u.u],
            "D_value": self.D_value,
            "Dbar_value": self.Dbar_value,
            "duality_gap": self.duality_gap,
            "roundtrip": self.roundtrip,
        }


@dataclass
class MaximizerReport:
    local_maxima: list
    global_estimate: float
    method_trace: dict = field(default_factory=dict)

    def global_maximizers(self, tol=1e-6):
        return [c for c in self.local_maxima
                if c.D_value >= self.global_estimate - tol]

    def to_json(self):
        return {
            "local_maxima": [c.to_json() for c in self.local_maxima],
            "global_estimate": self.global_estimate,
            "method_trace": self.method_trace,
        }


class _FaceCache:
    """Faces of the convex support keyed by the support of ``P``."""

    def __init__(self, family):
        self.family = family
        self.A_ext = family.A_ext
        self.faces = {}

    def project(self, P):
        key = tuple(np.flatnonzero(P > 0))
        if key not in self.faces:
            self.faces[key] = fiber_face(self.A_ext, P)
        return ri_project(self.family, P, face=self.faces[key])


def polish(family, u, max_iter=500, tol=1e-13, cache=None):
    """Iterate ``u -> Psi_E(u+)`` until it stops moving.

    Returns ``(direction, projection_of_u_plus)``; ``Dbar`` is nondecreasing
    along the iteration.
    """
    if cache is None:
        cache = _FaceCache(family)
    u = _normalize(np.asarray(u, dtype=float))
    nu = family.nu
    value = _dbar_raw(u, nu)
    proj = cache.project(np.where(u > 0, u, 0.0))
    for _ in range(max_iter):
        P = np.where(u > 0, u, 0.0)
        diff = P - proj.point
        s = diff[diff > 0].sum()
        if s <= 1e-14:
            break
        new = diff / s
        # tiny entries come from rounding in the projection
        new[np.abs(new) < 1e-15] = 0.0
        new = _normalize(new)
        new_value = _dbar_raw(new, nu)
        moved = np.max(np.abs(new - u))
        if new_value < value - 1e-12:
            break
        u, value = new, new_value
        proj = cache.project(np.where(u > 0, u, 0.0))
        if moved <= tol:
            break
    return KernelDirection(u), proj


def _evaluate(family, direction, proj=None):
    P = direction.plus
    if proj is None:
        proj = ri_project(family, P)
    D = proj.divergence
    db = _dbar_raw(direction.u, family.nu)
    gap = abs(D - np.logaddexp(0.0, db))
    try:
        back = psi_family(family, P, projection=proj).u
        roundtrip = float(np.max(np.abs(back - direction.u)))
    except PointInClosure:
        roundtrip = np.inf
    return Candidate(P, direction, float(D), db, float(gap), roundtrip)


def _seeds(family, B, n_starts, rng):
    codim = B.shape[1]
    seeds = []
    for _ in range(n_starts):
        c = rng.standard_normal(codim)
        seeds.append(B @ (c / np.linalg.norm(c)))
    return seeds


def local_maximizers(family, n_starts=64, seed=0, tol=1e-9, include_circuits=True,
                     gap_tol=1e-7, roundtrip_tol=1e-6):
    """Multistart search for the local maximisers of ``D_E``.

    Parameters
    ----------
    n_starts : int
        Number of random directions on the unit sphere of the normal space.
    seed : int
        Seed of the direction generator (recorded in the report).
    include_circuits : bool
        Also start from both orientations of every circuit vector.

    Returns
    -------
    MaximizerReport
        Candidates that pass the duality check, merged at total-variation
        distance ``1e-6`` on ``u+`` and sorted by decreasing ``D_value``.
    """
    if family.codim == 0:
        raise ZeroNormalSpace("the family is the full simplex")
    B = family.normal_projector()
    log_nu = np.log(family.nu)
    rng = np.random.default_rng(seed)
    starts = _seeds(family, B, n_starts, rng)
    if include_circuits:
        for c in circuit_basis(family):
            v = c.as_array()
            starts.extend([v, -v])
    cache = _FaceCache(family)
    kept = []
    rejected = 0
    for u0 in starts:
        u, _ = _ascend(u0, B, log_nu)
        snapped = _snap(u, B, 1e-7)
        if snapped is not None and _dbar_raw(snapped, family.nu) >= _dbar_raw(u, family.nu) - 1e-9:
            u = snapped
        direction, proj = polish(family, u, tol=tol, cache=cache)
        # slow polish runs creep towards a face; jump there when it helps
        snapped = _snap(direction.u, B, 1e-6)
        if snapped is not None:
            alt, alt_proj = polish(family, snapped, tol=tol, cache=cache)
            if _dbar_raw(alt.u, family.nu) >= _dbar_raw(direction.u, family.nu) - 1e-12:
                direction, proj = alt, alt_proj
        cand = _evaluate(family, direction, proj)
        if cand.duality_gap > gap_tol or cand.roundtrip > roundtrip_tol:
            rejected += 1
            continue
        if any(0.5 * np.abs(cand.P - k.P).sum() <= MERGE_DIST for k in kept):
            continue
        kept.append(cand)
    kept.sort(key=lambda c: (-round(c.D_value, 9), tuple(np.round(c.P, 9))))
    estimate = max((c.D_value for c in kept), default=float("nan"))
    trace = {"n_starts": n_starts, "seed": seed, "circuit_starts": include_circuits,
             "rejected": rejected, "tol": tol}
    return MaximizerReport(kept, estimate, trace)


def _compositions(m, k):
    """All k-tuples of nonnegative integers summing to m."""
    if k == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in _compositions(m - first, k - 1):
            yield (first,) + rest


def independent_supports(family):
    """Maximal supports of size <= dim+1 with linearly independent extended columns."""
    ext = [list(r) for r in family.extended]
    r = family.dim + 1
    n = family.n_states
    found = []
    for size in range(min(r, n), 0, -1):
        for S in combinations(range(n), size):
            if any(set(S) <= set(T) for T in found):
                continue
            if exact.rank(exact.columns(ext, S)) == size:
                found.append(S)
    return sorted(found)


def _mirror_ascent(family, P, cache, max_iter=300, tol=1e-12):
    """Exponentiated-gradient ascent of ``D_E`` on the face of the simplex
    spanned by ``supp(P)``; the gradient is ``log(P / P_E)``."""
    proj = cache.project(P)
    value = proj.divergence
    eta = 1.0
    for _ in range(max_iter):
        mask = P > 0
        g = np.zeros_like(P)
        g[mask] = np.log(P[mask]) - np.log(proj.point[mask])
        improved = False
        while eta > 1e-8:
            logits = np.full_like(P, -np.inf)
            logits[mask] = np.log(P[mask]) + eta * (g[mask] - g[mask].max())
            cand = np.exp(logits - np.max(logits[mask]))
            cand /= cand.sum()
            cand[cand < 1e-300] = 0.0
            cproj = cache.project(cand)
            if cproj.divergence > value:
                improved = True
                break
            eta *= 0.5
        if not improved:
            break
        gain = cproj.divergence - value
        P, proj, value = cand, cproj, cproj.divergence
        eta = min(eta * 2.0, 8.0)
        if gain < tol:
            break
    return P, value


def max_divergence_oracle(family, grid_step=0.05, max_points_per_support=400,
                          budget=200_000, n_refine=4):
    """Brute-force estimate of ``max D_E``.

    The maximum is attained at a distribution whose support has linearly
    independent extended columns, so it suffices to search the simplices of
    such supports. Each simplex is gridded (with spacing ``grid_step``,
    coarsened so that no simplex gets more than ``max_points_per_support``
    points) and the best grid points are refined by mirror ascent.

    Returns
    -------
    value : float
    argmax : ndarray
    """
    n = family.n_states
    if family.codim == 0:
        return 0.0, np.full(n, 1.0 / n)
    cache = _FaceCache(family)
    supports = independent_supports(family)
    plans = []
    total = 0
    for S in supports:
        k = len(S)
        m = max(1, int(round(1.0 / grid_step)))
        while m > 1 and _n_compositions(m, k) > max_points_per_support:
            m -= 1
        plans.append((S, m))
        total += _n_compositions(m, k)
    if total > budget:
        raise BudgetExceeded(f"{total} grid points exceed the budget of {budget}")
    scored = []
    for S, m in plans:
        for comp in _compositions(m, len(S)):
            P = np.zeros(n)
            P[list(S)] = np.array(comp, dtype=float) / m
            scored.append((cache.project(P).divergence, P))
    scored.sort(key=lambda t: -t[0])
    best_value, best_P = scored[0]
    for _, P in scored[:n_refine]:
        Pr, v = _mirror_ascent(family, P, cache)
        if v > best_value:
            best_value, best_P = v, Pr
    return float(best_value), best_P


def _n_compositions(m, k):
    from math import comb
    return comb(m + k - 1, k - 1)


@dataclass
class CriticalityReport:
    passed: bool
    max_violation: float
    support: tuple
    dbar_vanishes: bool
    outside_sum_violation: float
    tol: float


def criticality_check(family, u, tol=1e-8):
    """First-order condition at a candidate maximiser ``u`` of ``Dbar``.

    Checks that every normal vector sums to zero over ``supp(u)``. When
    ``Dbar`` vanishes on the normal basis and the circuits, also reports the
    largest ``|sum_{x not in supp u} v(x) log(|v(x)|/nu_x)|`` over the same
    vectors, which must vanish at a maximiser in that case.
    """
    if isinstance(u, KernelDirection):
        u = u.u
    u = np.asarray(u, dtype=float)
    scale = np.max(np.abs(u))
    Y = np.abs(u) > 1e-12 * scale
    V = family.normal_matrix
    violation = float(np.max(np.abs(V[:, Y].sum(axis=1)) / np.max(np.abs(V), axis=1))) if V.size else 0.0
    vectors = list(V) + [c.as_array() for c in circuit_basis(family)]
    vanishes = all(abs(_dbar_raw(v, family.nu)) <= tol for v in vectors)
    outside = 0.0
    if vanishes:
        for v in vectors:
            w = np.where(Y, 0.0, v)
            outside = max(outside, abs(_dbar_raw(w, family.nu)))
    passed = violation <= tol and (not vanishes or outside <= tol)
    return CriticalityReport(passed, violation, tuple(np.flatnonzero(Y)), vanishes, outside, tol)


class PartitionMaximizers:
    """Global maximisers of the divergence from a partition model."""

    def __init__(self, partition):
        self.partition = partition
        self.coarseness = partition.coarseness
        self.largest = [b for b in partition.blocks if len(b) == self.coarseness]

    def is_maximizer(self, P, tol=1e-9):
        """Mass only on largest blocks, and a point mass inside each of them."""
        P = np.asarray(P, dtype=float)
        for b in self.partition.blocks:
            mass = P[list(b)].sum()
            if len(b) != self.coarseness:
                if mass > tol:
                    return False
            elif mass > tol:
                inside = np.sort(P[list(b)])[::-1]
                if inside[1:].sum() > tol:
                    return False
        return True

    __call__ = is_maximizer

    def from_projection(self, Q, representatives=None):
        """A maximiser ``P`` whose projection is ``Q``.

        ``Q`` must be uniform on blocks and vanish outside the largest blocks.
        ``representatives`` maps a block (tuple) to the state receiving its
        mass; the smallest state is used by default.
        """
        Q = np.asarray(Q, dtype=float)
        P = np.zeros_like(Q)
        for b in self.partition.blocks:
            mass = Q[list(b)].sum()
            if len(b) != self.coarseness:
                if mass > 1e-12:
                    raise UnreachableTarget(
                        f"Q puts mass {mass:g} on the small block {b}")
                continue
            rep = (representatives or {}).get(b, b[0])
            P[rep] = mass
        return P

    def __iter__(self):
        """The point-mass maximisers, one per state of a largest block."""
        n = self.partition.n_states
        for b in self.largest:
            for x in b:
                P = np.zeros(n)
                P[x] = 1.0
                yield P


def partition_maximizers(partition):
    return PartitionMaximizers(partition)
