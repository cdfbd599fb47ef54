"""Exact linear algebra over Fraction matrices (lists of lists).

Everything here runs plain Gaussian elimination with exact rational
pivots; no numerics, no tolerance knobs.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionError, NonInvertibleError

Matrix = list[list[Fraction]]


def _as_matrix(rows) -> Matrix:
    out = [[Fraction(x) for x in row] for row in rows]
    if out and any(len(r) != len(out[0]) for r in out):
        raise DimensionError("ragged matrix")
    return out


def _row_echelon(mat: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot column indices."""
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(rows) -> int:
    _, pivots = _row_echelon(_as_matrix(rows))
    return len(pivots)


def nullspace(rows) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column."""
    mat = _as_matrix(rows)
    if not mat:
        return []
    cols = len(mat[0])
    rref, pivots = _row_echelon(mat)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * cols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][fc]
        basis.append(vec)
    return basis


def solve(rows, rhs) -> list[Fraction] | None:
    """One solution of A x = b, or None if inconsistent."""
    mat = _as_matrix(rows)
    b = [Fraction(x) for x in rhs]
    if len(mat) != len(b):
        raise DimensionError("rhs length does not match row count")
    if not mat:
        return []
    cols = len(mat[0])
    aug = [row + [bv] for row, bv in zip(mat, b)]
    rref, pivots = _row_echelon(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][cols]
    return x


def det(rows) -> Fraction:
    mat = _as_matrix(rows)
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise DimensionError("determinant requires a square matrix")
    m = [row[:] for row in mat]
    result = Fraction(1)
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            result = -result
        result *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                factor = m[i][c] * inv
                m[i] = [a - factor * b for a, b in zip(m[i], m[c])]
    return result


def inverse(rows) -> Matrix:
    mat = _as_matrix(rows)
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise DimensionError("inverse requires a square matrix")
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    rref, pivots = _row_echelon(aug)
    if pivots != list(range(n)):
        raise NonInvertibleError("matrix is singular")
    return [row[n:] for row in rref]
