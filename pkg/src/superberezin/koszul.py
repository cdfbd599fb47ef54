"""Homological model of the Berezinian line, used as a cross-check.

For V of dimension p|q we form the supersymmetric algebra S(ΠV ⊕ V*).
Its generators, as plain letters:

  even letters:  Πf_1 .. Πf_q  (Π of the odd basis of V), then
                 e*_1 .. e*_p  (duals of the even basis)
  odd letters:   Πe_1 .. Πe_p  (Π of the even basis), then
                 f*_1 .. f*_q  (duals of the odd basis)

Left multiplication by the canonical odd element
Π = Σ_i Πe_i·e*_i + Σ_j Πf_j·f*_j squares to zero and raises the total
polynomial degree by 2.  The homology is one line sitting in degree p+q,
spanned by the class of Πe_1⋯Πe_p·f*_1⋯f*_q; removing the Π^p shift, the
reported parity is q mod 2.

Everything is finite in each fixed degree, so ranks over exact rationals
give the homology dimensions with no approximation.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import linalg
from .errors import DimensionError, InconclusiveError
from .grassmann import Parity, Scalar

# A monomial is (even_exponents, odd_indices): a tuple of p+q nonnegative
# integers and a strictly increasing tuple of odd-letter indices.
Monomial = tuple[tuple[int, ...], tuple[int, ...]]


def _compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class KoszulComplexSlice:
    """S(ΠV ⊕ V*) truncated at a top polynomial degree, with d = Π·(-)."""

    def __init__(self, p: int, q: int, degree_cap: int):
        if p < 0 or q < 0:
            raise DimensionError("need nonnegative dimensions")
        if degree_cap < 0:
            raise DimensionError("degree cap must be nonnegative")
        self.p = p
        self.q = q
        self.degree_cap = degree_cap
        n = p + q
        # pairs (odd letter, even letter) making up the canonical element
        self._pairs = [(i, q + i) for i in range(p)] + [(p + j, j) for j in range(q)]
        self._bases: dict[int, list[Monomial]] = {}
        self._index: dict[int, dict[Monomial, int]] = {}
        for k in range(degree_cap + 1):
            basis = []
            for size in range(min(n, k) + 1):
                for odds in combinations(range(n), size):
                    for evens in _compositions(k - size, n):
                        basis.append((evens, odds))
            self._bases[k] = basis
            self._index[k] = {m: i for i, m in enumerate(basis)}

    def basis(self, degree: int, parity: Parity | None = None) -> list[Monomial]:
        monos = self._bases[degree]
        if parity is None:
            return list(monos)
        return [m for m in monos if len(m[1]) % 2 == parity.value]

    @staticmethod
    def parity_of(mono: Monomial) -> Parity:
        return Parity(len(mono[1]) % 2)

    def apply_d(self, mono: Monomial) -> list[tuple[Fraction, Monomial]]:
        """Left multiplication by the canonical element, degree +2."""
        evens, odds = mono
        out = []
        for odd_letter, even_letter in self._pairs:
            if odd_letter in odds:
                continue
            hops = sum(1 for o in odds if o < odd_letter)
            sign = -1 if hops % 2 else 1
            new_evens = list(evens)
            new_evens[even_letter] += 1
            new_odds = tuple(sorted(odds + (odd_letter,)))
            out.append((Fraction(sign), (tuple(new_evens), new_odds)))
        return out

    def differential_matrix(self, degree: int, parity: Parity):
        """Matrix of d on the given (degree, parity) slice; rows are sources."""
        source = self.basis(degree, parity)
        target_index = {
            m: i for i, m in enumerate(self.basis(degree + 2, parity.flip()))
        }
        rows = []
        for mono in source:
            row = [Fraction(0)] * len(target_index)
            for coeff, image in self.apply_d(mono):
                row[target_index[image]] += coeff
            rows.append(row)
        return rows

    def d_squared_vanishes(self, degree: int) -> bool:
        for mono in self._bases[degree]:
            acc: dict[Monomial, Fraction] = {}
            for c1, m1 in self.apply_d(mono):
                for c2, m2 in self.apply_d(m1):
                    acc[m2] = acc.get(m2, Fraction(0)) + c1 * c2
            if any(v != 0 for v in acc.values()):
                return False
        return True

    def homology_dimension(self, degree: int, parity: Parity) -> int:
        """dim ker - dim im at (degree, parity); needs degree ≤ cap - 2."""
        if degree + 2 > self.degree_cap:
            raise DimensionError("degree too close to the cap to compute homology")
        dim = len(self.basis(degree, parity))
        rank_out = linalg.rank(self.differential_matrix(degree, parity)) if dim else 0
        rank_in = 0
        if degree >= 2:
            rank_in = linalg.rank(self.differential_matrix(degree - 2, parity.flip()))
        return dim - rank_out - rank_in


def _homology_profile(p: int, q: int, cap: int) -> dict[tuple[int, int], int]:
    cx = KoszulComplexSlice(p, q, cap)
    profile = {}
    for k in range(cap - 1):
        for parity in Parity:
            d = cx.homology_dimension(k, parity)
            if d:
                profile[(k, parity.value)] = d
    return profile


def homological_berezinian(p: int, q: int, degree_cap: int) -> tuple[int, Parity]:
    """Total dimension and parity of the Berezinian line, computed homologically.

    Runs the truncated computation at degree_cap and degree_cap + 1; any
    disagreement on the shared range, or homology touching the top computed
    degree, raises InconclusiveError rather than returning a wrong answer.
    """
    if p + q < 1:
        raise DimensionError("need p + q >= 1")
    if degree_cap < p + q + 2:
        raise DimensionError("degree cap must be at least p + q + 2")
    first = _homology_profile(p, q, degree_cap)
    second = _homology_profile(p, q, degree_cap + 1)
    shared = {k: v for k, v in second.items() if k[0] <= degree_cap - 2}
    if first != shared:
        raise InconclusiveError(
            f"homology profile unstable between caps {degree_cap} and {degree_cap + 1}"
        )
    if any(k[0] >= degree_cap - 1 for k in second):
        raise InconclusiveError(
            "nonzero homology at the truncation boundary; increase degree_cap"
        )
    total = sum(second.values())
    if total == 0:
        raise InconclusiveError("no homology found below the truncation degree")
    parities = {k[1] for k in second}
    if len(parities) > 1:
        raise InconclusiveError("homology spread over both parities")
    # remove the Π^p parity shift of the homological model
    reported = Parity((parities.pop() + p) % 2)
    return total, reported


# -- D(x) classes and the canonical pairing -------------------------------


def expand_letter_product(combos, letter_count: int) -> dict[tuple[int, ...], Fraction]:
    """Multiply out a product of linear combinations of anticommuting letters.

    Each combo maps letter index -> Fraction.  Returns coefficients on
    increasing index tuples.
    """
    acc: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
    for combo in combos:
        nxt: dict[tuple[int, ...], Fraction] = {}
        for idx, coeff in acc.items():
            for letter, weight in combo.items():
                if letter < 0 or letter >= letter_count:
                    raise DimensionError("letter index out of range")
                if weight == 0 or letter in idx:
                    continue
                hops = sum(1 for o in idx if o > letter)
                sign = -1 if hops % 2 else 1
                new_idx = tuple(sorted(idx + (letter,)))
                val = nxt.get(new_idx, Fraction(0)) + sign * coeff * weight
                if val:
                    nxt[new_idx] = val
                else:
                    nxt.pop(new_idx, None)
        acc = nxt
    return acc


def d_class_factor(p: int, q: int, T) -> Fraction:
    """Factor λ with D(x') = λ·D(x) for the basis change x'_j = Σ_i T_ij x_i.

    T is a numeric block-diagonal (p+q)-square matrix (even transformation
    with constant entries).  The factor is read off by expanding the letter
    product representing D(x') inside the homological model.
    """
    n = p + q
    A = [[Fraction(T[i][j]) for j in range(p)] for i in range(p)]
    D = [[Fraction(T[p + i][p + j]) for j in range(q)] for i in range(q)]
    for i in range(n):
        for j in range(n):
            if (i < p) != (j < p) and Fraction(T[i][j]) != 0:
                raise DimensionError("numeric basis change must be block diagonal")
    Dinv = linalg.inverse(D) if q else []
    combos = []
    # even slots: Π(x'_j) = Σ_i A_ij·Πe_i, letters 0..p-1
    for j in range(p):
        combos.append({i: A[i][j] for i in range(p)})
    # odd slots: ξ'_{p+j} = Σ_k (D^-1)_jk·f*_k, letters p..p+q-1
    for j in range(q):
        combos.append({p + k: Dinv[j][k] for k in range(q)})
    expansion = expand_letter_product(combos, n)
    return expansion.get(tuple(range(n)), Fraction(0))


def dual_class_factor(p: int, q: int, T) -> Fraction:
    """Factor μ with D(ξ'_n,…,ξ'_1) = μ·D(ξ_n,…,ξ_1) for the same basis change.

    Works in the model of Ber(V*): odd letters there are Πξ_1..Πξ_p followed
    by the double duals x_{p+1}..x_n.  The reversed slot order is shared by
    the primed and unprimed products, so μ is their coefficient ratio.
    """
    n = p + q
    A = [[Fraction(T[i][j]) for j in range(p)] for i in range(p)]
    D = [[Fraction(T[p + i][p + j]) for j in range(q)] for i in range(q)]
    Ainv = linalg.inverse(A) if p else []
    primed = []
    plain = []
    for slot in range(n, 0, -1):
        i = slot - 1
        if i < p:
            # Π(ξ'_i) = Σ_k (A^-1)_ik·Πξ_k, letters 0..p-1
            primed.append({k: Ainv[i][k] for k in range(p)})
            plain.append({i: Fraction(1)})
        else:
            # x'_i = Σ_k D_{k,i-p}·x_{p+k}, letters p..n-1
            primed.append({p + k: D[k][i - p] for k in range(q)})
            plain.append({i: Fraction(1)})
    top = tuple(range(n))
    num = expand_letter_product(primed, n).get(top, Fraction(0))
    den = expand_letter_product(plain, n).get(top, Fraction(0))
    return num / den


def canonical_pairing(w1, w2) -> Scalar:
    """Pairing of Ber(V*) and Ber(V) coordinates in dual D(·)-bases.

    Normalized by ⟨D(ξ_n,…,ξ_1), D(x_1,…,x_n)⟩ = 1 and extended bilinearly,
    so coordinates simply multiply.
    """
    return Scalar.coerce(w1) * Scalar.coerce(w2)
