"""Exact rational linear algebra on lists of :class:`fractions.Fraction`.

Matrices are plain lists of rows. Everything here is deterministic and
free of floating point, which keeps rank and kernel decisions exact.
"""

from fractions import Fraction
from math import gcd, lcm
import numbers


def to_fraction(value):
    """Convert a number or a ``"p/q"`` string into a Fraction.

    Floats go through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the exact binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not valid rational entries")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, numbers.Real):
        value = float(value)
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError("non-finite entry")
        return Fraction(repr(value))
    raise TypeError(f"cannot convert {value!r} to a rational")


def fraction_to_str(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def as_matrix(rows):
    return [[to_fraction(v) for v in row] for row in rows]


def columns(matrix, idx):
    """Submatrix made of the columns listed in ``idx``."""
    return [[row[j] for j in idx] for row in matrix]


def rref(matrix):
    """Reduced row echelon form.

    Returns
    -------
    reduced : list of rows
        Only the nonzero rows are kept.
    pivots : list of int
        Pivot column of each returned row.
    """
    m = [list(row) for row in matrix]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(matrix):
    if not matrix or not matrix[0]:
        return 0
    return len(rref(matrix)[1])


def nullspace(matrix, ncols=None):
    """Basis of the right kernel, one vector per free column."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    reduced, pivots = rref(matrix) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def row_space_basis(matrix):
    return rref(matrix)[0] if matrix else []


def matvec(matrix, v):
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in matrix]


def solve(matrix, rhs):
    """Exact solution of a consistent square-or-tall system, or ``None``.

    The solution is unique only if the columns are independent; otherwise the
    particular solution with free variables set to zero is returned.
    """
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    ncols = len(matrix[0])
    reduced, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[-1]
    return x


def primitive(v):
    """Scale a rational vector to coprime integers with first nonzero positive."""
    nz = [q for q in v if q != 0]
    if not nz:
        return [Fraction(0)] * len(v)
    den = lcm(*(q.denominator for q in nz))
    ints = [int(q * den) for q in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if nz[0] < 0:
        g = -g
    return [Fraction(a // g) for a in ints]
