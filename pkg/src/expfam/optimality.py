"""Optimality experiments: lower-bound witnesses, log(2) structure checks,
optimality probes and the scanner for the smallest worst-case divergence
``D(N, k)`` of a k-dimensional family on N states.

Everything here that goes beyond a proven statement is sampling-based and
labelled as empirical evidence in its report.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, log

import numpy as np

from . import exact
from .circuits import circuit_basis, connected_components, coparallel_classes
from .errors import NotOneDimensional, ShapeMismatch, UniformNotInFamily
from .family import build_family, convex_support_vertices
from .maximize import _dbar_raw, local_maximizers, max_divergence_oracle
from .partition import Partition
from .projection import entropy, ri_project
from .zoo import near_equal_partition, partition_family

EVIDENCE = "empirical evidence"
LOG2 = log(2.0)


def estimate_max_divergence(family, n_starts=64, seed=0, include_circuits=True):
    """Multistart estimate of ``max D_E`` (0 for the full simplex)."""
    if family.codim == 0:
        return 0.0
    return local_maximizers(family, n_starts=n_starts, seed=seed,
                            include_circuits=include_circuits).global_estimate


def as_partition_model(family, tol=1e-12):
    """The partition ``pi`` if the closure of ``family`` is the partition
    model of ``pi``, else ``None``.

    This holds when the extended tangent space is spanned by the block
    indicators of the fibres of ``x -> A_x`` and ``nu`` is constant on each
    fibre.
    """
    n = family.n_states
    fibres = {}
    for x in range(n):
        fibres.setdefault(family.column(x), []).append(x)
    partition = Partition(fibres.values(), n)
    if family.dim != len(partition) - 1:
        return None
    for b in partition.blocks:
        vals = family.nu[list(b)]
        if np.max(np.abs(vals - vals[0])) > tol * vals[0]:
            return None
    return partition


def random_uniform_family(N, k, rng, decimals=3, max_tries=100):
    """Random k-dimensional family with uniform reference measure.

    The statistics are an orthonormal completion of the all-ones vector by
    Gaussian draws, rounded to ``decimals`` places so that they are exact
    rationals. Redraws if rounding lowers the rank.
    """
    if k == 0:
        return build_family(N, [1] * N, [])
    for _ in range(max_tries):
        G = np.column_stack([np.ones(N), rng.standard_normal((N, k))])
        q, _ = np.linalg.qr(G)
        rows = np.round(q[:, 1:].T, decimals)
        stats = [[Fraction(round(v * 10**decimals), 10**decimals) for v in r]
                 for r in rows]
        family = build_family(N, [1] * N, stats)
        if family.dim == k:
            return family
    raise RuntimeError(f"could not draw a {k}-dimensional family on {N} states")


@dataclass
class CaratheodoryWitness:
    """A distribution whose divergence certifies ``max D >= log N - log(k+1)``."""

    P: np.ndarray
    bound: float
    value: float
    states: tuple
    weights: tuple
    recomputed: float

    def __iter__(self):
        return iter((self.P, self.bound))

    @property
    def satisfies_bound(self):
        return self.value >= self.bound - 1e-7

    def to_json(self):
        return {"P": [float(v) for v in self.P], "bound": self.bound,
                "value": self.value, "states": list(self.states),
                "weights": [exact.fraction_to_str(w) for w in self.weights],
                "recomputed": self.recomputed}


def caratheodory_witness(family):
    """Write the mean of the statistics under the uniform distribution as a
    convex combination of at most ``dim + 1`` vertex columns.

    The index set is the lexicographically smallest affinely independent set
    of vertex states that works; weights are exact. ``P = sum w_i delta_i``
    has the moments of the uniform distribution ``Q``, so
    ``D_E(P) = H(Q) - H(P) >= log N - log(dim + 1)``.

    Raises
    ------
    UniformNotInFamily
    """
    n = family.n_states
    Q = np.full(n, 1.0 / n)
    if ri_project(family, Q).divergence > 1e-9:
        raise UniformNotInFamily("the uniform distribution is not in the family")
    ext = [list(r) for r in family.extended]
    target = [sum(row, Fraction(0)) / n for row in ext]
    verts = sorted(convex_support_vertices(family).vertices)
    subsets = sorted(S for size in range(1, family.dim + 2)
                     for S in combinations(verts, size))
    for S in subsets:
        cols = exact.columns(ext, S)
        if exact.rank(cols) < len(S):
            continue
        lam = exact.solve(cols, target)
        if lam is None or any(w < 0 for w in lam):
            continue
        P = np.zeros(n)
        P[list(S)] = [float(w) for w in lam]
        value = log(n) - entropy(P)
        recomputed = ri_project(family, P).divergence
        bound = log(n) - log(family.dim + 1)
        return CaratheodoryWitness(P, bound, value, tuple(S), tuple(lam), recomputed)
    raise AssertionError("no convex decomposition found over the vertices")


def equality_case(family, max_D=None, tol=1e-6, n_starts=64, seed=0):
    """Classify a family containing the uniform distribution against the
    bound ``log N - log(dim + 1)``.

    Returns one of ``"strict"``, ``"partition model of a homogeneous
    partition"`` or ``"equality without homogeneous partition"`` (the last
    would contradict the known characterisation).
    """
    n = family.n_states
    bound = log(n) - log(family.dim + 1)
    if max_D is None:
        max_D = estimate_max_divergence(family, n_starts, seed)
    if max_D > bound + tol:
        return "strict"
    partition = as_partition_model(family)
    if partition is not None and partition.homogeneous:
        return "partition model of a homogeneous partition"
    return "equality without homogeneous partition"


@dataclass
class Log2StructureReport:
    max_D: float
    hypothesis_met: bool
    dim: int
    dim_bound: int
    class_sizes: list = field(default_factory=list)
    components: list = field(default_factory=list)
    partition: Partition = None
    verdicts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return all(self.verdicts.values())

    def to_json(self):
        return {"max_D": self.max_D, "hypothesis_met": self.hypothesis_met,
                "dim": self.dim, "dim_bound": self.dim_bound,
                "class_sizes": self.class_sizes,
                "components": [list(c) for c in self.components],
                "partition": None if self.partition is None
                else [list(b) for b in self.partition.blocks],
                "verdicts": self.verdicts, "notes": self.notes}


def check_log2_structure(family, tol=1e-6, max_D=None, n_starts=64, seed=0):
    """Structure of a family whose maximal divergence is ``log 2``.

    Checks ``dim >= ceil(N/2) - 1``. In the minimal-dimension case the
    coparallel classes must be pairs (even N) or pairs plus at most one
    triple (odd N). The closure is then the mixture of the classes'
    families, the pairs forming a partition model. With uniform reference
    measure, or with even N, the closure itself is a partition model.
    """
    n = family.n_states
    if max_D is None:
        max_D = estimate_max_divergence(family, n_starts, seed)
    dim_bound = ceil(n / 2) - 1
    report = Log2StructureReport(float(max_D), abs(max_D - LOG2) <= tol,
                                 family.dim, dim_bound)
    if not report.hypothesis_met:
        report.notes.append("log2 hypothesis not met")
        return report
    basis = circuit_basis(family)
    cop = coparallel_classes(family, basis)
    comps = connected_components(family, basis)
    report.class_sizes = sorted(len(c) for c in cop.classes)
    report.components = comps
    report.partition = as_partition_model(family)
    report.verdicts["dimension bound"] = family.dim >= dim_bound
    uniform = bool(np.allclose(family.nu, family.nu[0], rtol=1e-12, atol=0))
    if family.dim != dim_bound:
        report.notes.append("dimension is not minimal; no classification claimed")
        if uniform:
            report.notes.append("uniform reference measure")
        return report
    sizes = report.class_sizes
    if n % 2 == 0:
        report.verdicts["classes are pairs"] = sizes == [2] * (n // 2) and not cop.loops
        report.verdicts["partition model"] = report.partition is not None
        return report
    report.verdicts["classes are pairs and one triple"] = (
        not cop.loops and sizes.count(3) <= 1 and sizes.count(2) == len(sizes) - sizes.count(3)
        and sum(sizes) == n)
    report.verdicts["components are the classes"] = sorted(comps) == sorted(cop.classes)
    pairs_ok = all(np.isclose(family.nu[c[0]], family.nu[c[1]], rtol=1e-12, atol=0)
                   for c in comps if len(c) == 2)
    report.verdicts["pairs form a partition model"] = pairs_ok
    for c in basis:
        if len(c.support) == 3:
            # the triple carries a one-dimensional family with max D = log 2
            report.verdicts["triple has vanishing Dbar"] = (
                abs(_dbar_raw(c.as_array(), family.nu)) <= tol)
    if uniform:
        report.verdicts["partition model"] = report.partition is not None
    return report


@dataclass
class OneDimResult:
    optimal: bool
    mu: float
    u: np.ndarray
    D: float

    def __iter__(self):
        return iter((self.optimal, self.mu))

    def __bool__(self):
        return self.optimal


def one_dim_optimality(family, D, u=None, tol=1e-12):
    """Does a one-dimensional family on three states have ``max D_E <= D``?

    With ``u`` scaled so ``u+`` and ``u-`` are probability vectors, the
    projection of ``u+`` is ``mu u+ + (1 - mu) u-`` and the condition is
    ``exp(-D) <= mu <= 1 - exp(-D)``. By default ``u`` is the normal vector
    oriented so that ``u+`` has the smaller support.

    Returns
    -------
    OneDimResult
        Unpacks as ``(optimal, mu)``.
    """
    if family.n_states != 3 or family.dim != 1:
        raise NotOneDimensional(
            f"need a one-dimensional family on 3 states, got N={family.n_states}, "
            f"dim={family.dim}")
    if u is None:
        u = np.array([float(q) for q in family.normal_basis[0]])
        if np.sum(u > 0) > np.sum(u < 0):
            u = -u
    u = np.asarray(u, dtype=float)
    plus = np.where(u > 0, u, 0.0)
    plus /= plus.sum()
    point = ri_project(family, plus).point
    mu = float(point[u > 0].sum())
    lo = np.exp(-D)
    ok = lo - tol <= mu <= 1 - lo + tol
    return OneDimResult(bool(ok), mu, u, float(D))


def zero_dim_optimality(nu, D, tol=1e-12):
    """``max_x -log nu_x <= D`` for the zero-dimensional family ``{nu}``."""
    nu = np.asarray(nu, dtype=float)
    nu = nu / nu.sum()
    return bool(np.max(-np.log(nu)) <= D + tol)


@dataclass
class InclusionProbeReport:
    partition: Partition
    max_D: float
    target: float
    probes: list
    margin: float
    label: str = EVIDENCE

    @property
    def max_verified(self):
        return abs(self.max_D - self.target) <= 1e-6

    @property
    def all_probes_exceed(self):
        return all(p > self.target + self.margin for p in self.probes)

    def to_json(self):
        return {"blocks": [list(b) for b in self.partition.blocks],
                "max_D": self.max_D, "target": self.target,
                "probes": self.probes, "margin": self.margin,
                "max_verified": self.max_verified,
                "all_probes_exceed": self.all_probes_exceed, "label": self.label}


def inclusion_optimal_partition_check(partition, n_probes=8, seed=0, margin=1e-4,
                                      n_starts=32):
    """Probe that no proper subfamily of a partition model reaches ``log c``.

    The partition must have all blocks of size ``c`` except possibly one
    smaller block, and ``c < N``. Subfamilies are drawn as random
    codimension-one subspaces of the tangent space that contain the
    constants, with uniform reference measure.
    """
    if not isinstance(partition, Partition):
        partition = Partition(partition)
    c = partition.coarseness
    n = partition.n_states
    small = [b for b in partition.blocks if len(b) != c]
    if len(small) > 1 or c >= n:
        raise ShapeMismatch(
            "need all blocks of the largest size except at most one, and c < N")
    family = partition_family(partition)
    max_D = estimate_max_divergence(family, n_starts, seed)
    rng = np.random.default_rng(seed)
    indicators = np.array([[float(x in b) for x in range(n)] for b in partition.blocks])
    k = len(partition) - 1
    probes = []
    for _ in range(n_probes):
        # random combinations of indicators, orthogonal to the constants
        W = rng.standard_normal((k - 1, len(partition))) @ indicators if k > 1 \
            else np.zeros((0, n))
        W = W - W.mean(axis=1, keepdims=True)
        stats = [[Fraction(round(v * 1000), 1000) for v in row] for row in W]
        sub = build_family(n, [1] * n, stats)
        probes.append(float(estimate_max_divergence(sub, n_starts, seed)))
    return InclusionProbeReport(partition, float(max_D), log(c), probes, margin)


@dataclass
class ScanReport:
    N: int
    k: int
    seed: int
    conjectured: float
    best_partition: float
    partition_check: float
    values: list
    rechecks: list
    margin: float
    label: str = EVIDENCE

    @property
    def min_value(self):
        return min(self.values) if self.values else float("nan")

    @property
    def violation(self):
        """A sample beats the best partition model by more than the margin."""
        return any(v < self.best_partition - self.margin for v in self.values)

    def rows(self):
        """``(family_id, N, k, maxD, bound)`` per sampled family."""
        return [(i, self.N, self.k, v, self.conjectured) for i, v in enumerate(self.values)]

    def to_json(self):
        return {"N": self.N, "k": self.k, "seed": self.seed,
                "conjectured": self.conjectured, "best_partition": self.best_partition,
                "partition_check": self.partition_check, "n_samples": len(self.values),
                "min_value": self.min_value, "violation": self.violation,
                "rechecks": self.rechecks, "margin": self.margin, "label": self.label,
                "values": self.values}


def scan_conjecture(N, k, n_random_families=200, seed=0, n_starts=8, margin=1e-4):
    """Compare random k-dimensional families containing the uniform
    distribution with the best partition model into ``k + 1`` blocks.

    Samples are first estimated with a cheap multistart. Any sample below
    the best partition value minus ``margin`` is rechecked with the full
    multistart and the brute-force oracle; the larger estimate is kept and
    the recheck is recorded.
    """
    if not (N <= 8 and 0 <= k < N):
        raise ValueError("need N <= 8 and 0 <= k < N")
    conjectured = log(ceil(N / (k + 1)))
    partition = near_equal_partition(N, k + 1)
    best = log(partition.coarseness)
    partition_check = float(estimate_max_divergence(partition_family(partition),
                                                    n_starts, seed))
    rng = np.random.default_rng(seed)
    values, rechecks = [], []
    for i in range(n_random_families):
        family = random_uniform_family(N, k, rng)
        value = float(estimate_max_divergence(family, n_starts, seed + i,
                                              include_circuits=False))
        if value < best - margin:
            full = float(estimate_max_divergence(family, 64, seed + i))
            oracle, _ = max_divergence_oracle(family)
            rechecks.append({"family_id": i, "first": value, "multistart": full,
                             "oracle": float(oracle),
                             "stats": [[exact.fraction_to_str(q) for q in row]
                                       for row in family.stats]})
            value = max(value, full, float(oracle))
        values.append(value)
    return ScanReport(N, k, seed, conjectured, best, partition_check, values,
                      rechecks, margin)


@dataclass
class OptimalityReport:
    """Per-family summary with estimates and verdicts."""

    family: dict
    max_D: float
    bound: float
    witnesses: list
    structure: dict
    verdicts: dict
    tolerances: dict

    @property
    def passed(self):
        return all(self.verdicts.values())

    def to_json(self):
        return {"family": self.family, "max_D": self.max_D, "bound": self.bound,
                "witnesses": [{"P": [float(v) for v in P], "D": d}
                              for P, d in self.witnesses],
                "structure": self.structure, "verdicts": self.verdicts,
                "tolerances": self.tolerances}


def optimality_report(family, n_starts=64, seed=0, tol=1e-6, oracle=False):
    """Run the checks that apply to ``family`` and collect their verdicts."""
    n = family.n_states
    summary = {"N": n, "dim": family.dim, "codim": family.codim}
    verdicts, structure, witnesses = {}, {}, []
    tolerances = {"estimate": tol, "witness": 1e-7, "duality": 1e-7}
    if family.codim == 0:
        return OptimalityReport(summary, 0.0, 0.0, [], {}, {}, tolerances)
    report = local_maximizers(family, n_starts=n_starts, seed=seed)
    max_D = report.global_estimate
    for c in report.global_maximizers(tol):
        witnesses.append((c.P, c.D_value))
    verdicts["lower bound log 2"] = max_D >= LOG2 - tol
    verdicts["duality at local maxima"] = all(
        c.duality_gap <= 1e-7 for c in report.local_maxima)
    bound = LOG2
    uniform_in = ri_project(family, np.full(n, 1.0 / n)).divergence <= 1e-9
    structure["contains uniform"] = bool(uniform_in)
    if uniform_in:
        w = caratheodory_witness(family)
        witnesses.append((w.P, w.recomputed))
        bound = max(bound, w.bound)
        verdicts["witness bound"] = w.satisfies_bound
        verdicts["witness recomputation"] = abs(w.value - w.recomputed) <= 1e-7
        structure["equality case"] = equality_case(family, max_D, tol)
    partition = as_partition_model(family)
    structure["partition model"] = None if partition is None \
        else [list(b) for b in partition.blocks]
    if partition is not None:
        verdicts["partition law"] = abs(max_D - log(partition.coarseness)) <= tol
    log2 = check_log2_structure(family, tol, max_D=max_D)
    structure["log2"] = log2.to_json()
    verdicts.update({f"log2: {k}": v for k, v in log2.verdicts.items()})
    if oracle:
        value, _ = max_divergence_oracle(family)
        structure["oracle"] = value
        verdicts["oracle agreement"] = abs(value - max_D) <= 1e-3
    return OptimalityReport(summary, float(max_D), float(bound), witnesses,
                            structure, verdicts, tolerances)
