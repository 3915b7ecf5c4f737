"""Information divergence and the generalized rI-projection.

The projection of ``P`` onto the closure of a family is the unique ``Q`` in
the closure with the same moments ``A Q = A P``. It is computed by Newton's
method on the concave dual (the log-likelihood in natural parameters) after
restricting to the face of the convex support that carries ``A P`` in its
relative interior. Partition families get a closed form.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import linprog

from .errors import EmptySet, NoConvergence

DEFAULT_TOL = 1e-10


def divergence(P, Q):
    """``sum P log(P/Q)`` with ``0 log 0 = 0``; ``inf`` off the support of Q."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    mask = P > 0
    if np.any(Q[mask] <= 0):
        return np.inf
    return float(np.sum(P[mask] * (np.log(P[mask]) - np.log(Q[mask]))))


def entropy(P):
    P = np.asarray(P, dtype=float)
    p = P[P > 0]
    return float(-np.sum(p * np.log(p)))


@dataclass
class Truncation:
    values: np.ndarray
    arbitrary: bool


def truncate(P, Y):
    """Conditional distribution of ``P`` on the states ``Y`` (in ``Y`` order).

    When ``P(Y) = 0`` the uniform distribution on ``Y`` is returned and the
    result is flagged as an arbitrary choice.
    """
    Y = list(Y)
    if not Y:
        raise EmptySet("cannot truncate to an empty set")
    P = np.asarray(P, dtype=float)
    mass = P[Y].sum()
    if mass > 0:
        return Truncation(P[Y] / mass, False)
    return Truncation(np.full(len(Y), 1.0 / len(Y)), True)


@dataclass
class ProjectionResult:
    point: np.ndarray
    divergence: float
    face_support: tuple
    iterations: int
    residual: float
    tol: float
    dual_trace: list = field(default_factory=list, repr=False)
    face_reductions: int = 0

    def to_json(self):
        return {
            "point": [float(v) for v in self.point],
            "divergence": float(self.divergence),
            "face_support": list(self.face_support),
            "iterations": self.iterations,
            "residual": float(self.residual),
            "tol": self.tol,
        }


def fiber_face(A_ext, P):
    """States that carry mass for some distribution with the moments of ``P``.

    These are the states whose columns lie on the smallest face of the convex
    support containing ``A P``. Solved as one LP over the homogenised fibre
    cone ``{y >= 0 : A_ext y = a A_ext P, a >= 0}``: maximise ``sum t`` with
    ``t <= y`` and ``t <= 1``; states on the face reach ``t = 1``.
    """
    n = P.size
    support = P > 0
    if support.all():
        return tuple(range(n))
    b = A_ext @ P
    m = A_ext.shape[0]
    # variables: y (n), t (n), a (1)
    c = np.concatenate([np.zeros(n), -np.ones(n), [0.0]])
    A_eq = np.hstack([A_ext, np.zeros((m, n)), -b[:, None]])
    A_ub = np.hstack([-np.eye(n), np.eye(n), np.zeros((n, 1))])
    bounds = [(0, None)] * n + [(0, 1)] * n + [(0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=np.zeros(m),
                  bounds=bounds, method="highs")
    face = set(np.flatnonzero(support))
    if res.status == 0:
        t = res.x[n:2 * n]
        face |= set(np.flatnonzero(t > 0.5))
    return tuple(sorted(int(x) for x in face))


def _logsumexp(a):
    top = np.max(a)
    return top + np.log(np.sum(np.exp(a - top)))


def _tangent_coordinates(A_face):
    """Orthonormal rows spanning the centred statistics on a face."""
    if A_face.shape[0] == 0 or A_face.shape[1] <= 1:
        return np.zeros((0, A_face.shape[1]))
    centred = A_face - A_face.mean(axis=1, keepdims=True)
    _, s, vt = np.linalg.svd(centred, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((0, A_face.shape[1]))
    r = int(np.sum(s > 1e-10 * s[0]))
    return vt[:r]


def _newton_dual(log_nu, T, m, tol, max_iter, theta_limit):
    """Maximise ``eta . m - logsumexp(log_nu + T^T eta)``.

    Returns ``(eta, p, iterations, trace, diverged)``.
    """
    r = T.shape[0]
    eta = np.zeros(r)

    def evaluate(eta):
        logits = log_nu + eta @ T
        lz = _logsumexp(logits)
        return eta @ m - lz, np.exp(logits - lz)

    value, p = evaluate(eta)
    trace = [value]
    for it in range(1, max_iter + 1):
        grad = m - T @ p
        if r == 0 or np.max(np.abs(grad)) <= tol:
            return eta, p, it - 1, trace, False
        fisher = (T * p) @ T.T - np.outer(T @ p, T @ p)
        fisher[np.diag_indices_from(fisher)] += 1e-12
        try:
            step = cho_solve(cho_factor(fisher), grad)
        except np.linalg.LinAlgError:
            step = grad
        slope = grad @ step
        gnorm = np.max(np.abs(grad))
        t = 1.0
        while True:
            cand = eta + t * step
            new_value, new_p = evaluate(cand)
            if new_value >= value + 1e-4 * t * slope:
                break
            # at rounding level the dual value is flat; judge by the gradient
            flat = abs(new_value - value) <= 1e-14 * (1.0 + abs(value))
            if flat and np.max(np.abs(m - T @ new_p)) < gnorm:
                break
            t *= 0.5
            if t < 1e-12:
                return eta, p, it, trace, False
        eta, value, p = cand, new_value, new_p
        trace.append(value)
        if np.linalg.norm(eta) > theta_limit:
            return eta, p, it, trace, True
    return eta, p, max_iter, trace, False


def ri_project(family, P, tol=DEFAULT_TOL, max_iter=200, theta_limit=1e3,
               face=None):
    """Generalized rI-projection of ``P`` onto the closure of ``family``.

    Parameters
    ----------
    family : ExponentialFamily
    P : array_like
        Probability vector.
    tol : float
        Bound on the moment residual ``max |A P - A P_E|``.
    theta_limit : float
        Natural-parameter norm beyond which the iterates are treated as
        escaping to a face of the convex support.
    face : tuple of int, optional
        Known face states for ``supp(P)`` (the face depends on the support
        only); skips the LP.

    Returns
    -------
    ProjectionResult
    """
    P = np.asarray(P, dtype=float)
    n = family.n_states
    A = family.A
    A_ext = family.A_ext
    if face is None:
        face = fiber_face(A_ext, P)
    reductions = 0
    total_iter = 0
    trace = []
    while True:
        idx = np.array(face)
        T = _tangent_coordinates(A[:, idx])
        log_nu = np.log(family.nu[idx])
        m = T @ P[idx]
        eta, p, iters, tr, diverged = _newton_dual(
            log_nu, T, m, tol * 1e-2, max_iter, theta_limit)
        total_iter += iters
        trace.extend(tr)
        if not diverged:
            break
        # iterates escape: drop the states the iterates are draining
        reductions += 1
        keep = (p > 1e-10) | (P[idx] > 0)
        if keep.all():
            break
        face = tuple(int(x) for x in idx[keep])
    point = np.zeros(n)
    point[idx] = p
    residual = float(np.max(np.abs(A @ P - A @ point))) if A.size else 0.0
    if residual > tol:
        raise NoConvergence(
            f"moment residual {residual:.3e} exceeds tol {tol:.1e}",
            {"face": face, "iterations": total_iter, "residual": residual})
    return ProjectionResult(point, divergence(P, point), face, total_iter,
                            residual, tol, trace, reductions)


def partition_project(partition, P):
    """Average ``P`` over the blocks of the partition."""
    P = np.asarray(P, dtype=float)
    out = np.empty_like(P)
    for b in partition.blocks:
        b = list(b)
        out[b] = P[b].sum() / len(b)
    return out


def partition_divergence(partition, P):
    """``sum_i P(B_i) (log|B_i| - H(P|B_i))``."""
    P = np.asarray(P, dtype=float)
    total = 0.0
    for b in partition.blocks:
        b = list(b)
        mass = P[b].sum()
        if mass > 0:
            total += mass * (np.log(len(b)) - entropy(P[b] / mass))
    return total
