"""Block matrices over a supercommutative ring: supertrace and Berezinian.

Entries may be any objects implementing the small ring protocol used
throughout the package: ``__add__``, ``__sub__``, ``__neg__``, ``__mul__``,
``is_zero()``, ``parity()`` and — for invertible even elements —
``inv_even()``.  Both Grassmann elements and superfunctions qualify, so
the same Berezinian code serves constant matrices and Jacobians.

Determinants use Laplace expansion and inverses the adjugate formula;
block sizes stay small here and this keeps everything division-free
except for the single final ``inv_even``.
"""

from __future__ import annotations

from .errors import DimensionError, NonInvertibleError, ParityError
from .grassmann import EVEN, ODD, Parity


def _det(entries, one):
    """Laplace-expansion determinant of a square matrix of even entries."""
    n = len(entries)
    if n == 0:
        return one
    if n == 1:
        return entries[0][0]
    acc = None
    for j in range(n):
        top = entries[0][j]
        if top.is_zero():
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in entries[1:]]
        term = top * _det(minor, one)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        zero = entries[0][0] - entries[0][0]
        return zero
    return acc


def _matrix_inverse(entries, one):
    """Adjugate inverse; entries must be even (hence central)."""
    n = len(entries)
    d = _det(entries, one)
    try:
        dinv = d.inv_even()
    except NonInvertibleError:
        raise NonInvertibleError("block determinant is not invertible")
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [[entries[r][c] for c in range(n) if c != i]
                     for r in range(n) if r != j]
            cof = _det(minor, one)
            if (i + j) % 2:
                cof = -cof
            row.append(cof * dinv)
        out.append(row)
    return out


class SuperMatrix:
    """A (p+q) x (p+q) matrix split into even/odd blocks.

    A homogeneous supermatrix of parity ``par`` has entry (i, j) of parity
    rowblock(i) + colblock(j) + par.  The even case is the familiar
    [[A, B], [C, D]] picture with A, D even and B, C odd.
    """

    __slots__ = ("p", "q", "parity", "entries", "zero", "one")

    def __init__(self, p: int, q: int, entries, parity: Parity = EVEN, *, zero, one):
        if p < 0 or q < 0:
            raise DimensionError("block sizes must be nonnegative")
        n = p + q
        rows = [list(row) for row in entries]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise DimensionError(f"expected a {n} x {n} entry grid")
        for i in range(n):
            for j in range(n):
                e = rows[i][j]
                if e.is_zero():
                    continue
                want = ((i >= p) + (j >= p) + parity.value) % 2
                got = e.parity()
                if got is None or got.value != want:
                    raise ParityError(
                        f"entry ({i}, {j}) must be {Parity(want)}, got {e!s}"
                    )
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "entries", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "zero", zero)
        object.__setattr__(self, "one", one)

    def __setattr__(self, name, value):
        raise AttributeError("SuperMatrix is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(p: int, q: int, *, zero, one) -> "SuperMatrix":
        n = p + q
        ent = [[one if i == j else zero for j in range(n)] for i in range(n)]
        return SuperMatrix(p, q, ent, EVEN, zero=zero, one=one)

    @staticmethod
    def from_blocks(A, B, C, D, parity: Parity = EVEN, *, zero, one) -> "SuperMatrix":
        p = len(A)
        q = len(D)
        ent = [list(A[i]) + list(B[i]) for i in range(p)]
        ent += [list(C[i]) + list(D[i]) for i in range(q)]
        return SuperMatrix(p, q, ent, parity, zero=zero, one=one)

    # -- block access -------------------------------------------------

    def block(self, name: str):
        p, q = self.p, self.q
        if name == "A":
            return [[self.entries[i][j] for j in range(p)] for i in range(p)]
        if name == "B":
            return [[self.entries[i][p + j] for j in range(q)] for i in range(p)]
        if name == "C":
            return [[self.entries[p + i][j] for j in range(p)] for i in range(q)]
        if name == "D":
            return [[self.entries[p + i][p + j] for j in range(q)] for i in range(q)]
        raise ValueError(f"unknown block {name!r}")

    # -- arithmetic ---------------------------------------------------

    def _check_shape(self, other: "SuperMatrix"):
        if (self.p, self.q) != (other.p, other.q):
            raise DimensionError("supermatrix shapes differ")

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._check_shape(other)
        if self.parity is not other.parity:
            raise ParityError("cannot add supermatrices of different parity")
        n = self.p + self.q
        ent = [[self.entries[i][j] + other.entries[i][j] for j in range(n)]
               for i in range(n)]
        return SuperMatrix(self.p, self.q, ent, self.parity,
                           zero=self.zero, one=self.one)

    def __neg__(self) -> "SuperMatrix":
        ent = [[-e for e in row] for row in self.entries]
        return SuperMatrix(self.p, self.q, ent, self.parity,
                           zero=self.zero, one=self.one)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self + (-other)

    def __mul__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._check_shape(other)
        n = self.p + self.q
        ent = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.zero
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            ent.append(row)
        return SuperMatrix(self.p, self.q, ent, self.parity + other.parity,
                           zero=self.zero, one=self.one)

    def map_entries(self, fn) -> "SuperMatrix":
        ent = [[fn(e) for e in row] for row in self.entries]
        return SuperMatrix(self.p, self.q, ent, self.parity,
                           zero=self.zero, one=self.one)

    # -- invariants ---------------------------------------------------

    def supertrace(self):
        acc = self.zero
        for i in range(self.p):
            acc = acc + self.entries[i][i]
        for j in range(self.q):
            acc = acc - self.entries[self.p + j][self.p + j]
        return acc

    def berezinian(self):
        """Ber = det(A - B D^-1 C) * det(D)^-1 for an even supermatrix."""
        if self.parity is not EVEN:
            raise ParityError("Berezinian is defined for even supermatrices")
        p, q = self.p, self.q
        one = self.one
        if q == 0:
            return _det(self.block("A"), one)
        D = self.block("D")
        det_d = _det(D, one)
        try:
            det_d_inv = det_d.inv_even()
        except NonInvertibleError:
            raise NonInvertibleError("odd-odd block is not invertible")
        if p == 0:
            return det_d_inv
        A, B, C = self.block("A"), self.block("B"), self.block("C")
        Dinv = _matrix_inverse(D, one)
        schur = [
            [
                A[i][j] - _dot_triple(B[i], Dinv, [C[k][j] for k in range(q)], self.zero)
                for j in range(p)
            ]
            for i in range(p)
        ]
        return _det(schur, one) * det_d_inv

    # -- comparison / printing ----------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return ((self.p, self.q, self.parity) == (other.p, other.q, other.parity)
                and self.entries == other.entries)

    def __str__(self) -> str:
        rows = [" | ".join(str(e) for e in row) for row in self.entries]
        return "\n".join(rows)

    def __repr__(self) -> str:
        return f"SuperMatrix(p={self.p}, q={self.q}, parity={self.parity})"


def _dot_triple(row_b, dinv, col_c, zero):
    """(B D^-1 C)[i][j] given row i of B and column j of C."""
    q = len(col_c)
    acc = zero
    for k in range(q):
        for l in range(q):
            acc = acc + row_b[k] * dinv[k][l] * col_c[l]
    return acc


def berezinian(m: SuperMatrix):
    return m.berezinian()


def supertrace(m: SuperMatrix):
    return m.supertrace()


def sm_mul(x: SuperMatrix, y: SuperMatrix) -> SuperMatrix:
    return x * y


# homological cross-checks live next door but belong to this module's API
from .koszul import canonical_pairing, homological_berezinian  # noqa: E402,F401
