"""Exact supercommutative algebra on finitely many anticommuting generators.

Scalars are rationals times an integer power of the formal symbol
``s = sqrt(2*pi)``; keeping the power symbolic makes Gaussian-moment
integration exact.  Algebra elements are finite sums of odd monomials
``xi_{i1}...xi_{ik}`` with strictly increasing indices and Scalar
coefficients.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    DimensionError,
    NonInvertibleError,
    ParityError,
    ScalarExponentError,
)


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    def __add__(self, other: "Parity") -> "Parity":
        return Parity((self.value + other.value) % 2)

    def flip(self) -> "Parity":
        return Parity(1 - self.value)

    def __str__(self) -> str:
        return "even" if self is Parity.EVEN else "odd"


EVEN = Parity.EVEN
ODD = Parity.ODD


def koszul_sign(a: Parity, b: Parity) -> int:
    """Sign picked up when homogeneous elements of these parities swap."""
    return -1 if (a is ODD and b is ODD) else 1


class Scalar:
    """An exact value ``rational * s**gauss_exponent`` with s = sqrt(2*pi).

    Zero normalises its exponent to 0 and is the additive identity for
    every exponent.  Adding two nonzero scalars with different exponents
    is an error, never a silent coercion.
    """

    __slots__ = ("rational", "gauss_exponent")

    def __init__(self, rational, gauss_exponent: int = 0):
        q = Fraction(rational)
        object.__setattr__(self, "rational", q)
        object.__setattr__(self, "gauss_exponent", 0 if q == 0 else int(gauss_exponent))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Scalar":
        return Scalar(0)

    @staticmethod
    def one() -> "Scalar":
        return Scalar(1)

    @staticmethod
    def coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(value)
        raise TypeError(f"cannot interpret {value!r} as a Scalar")

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.rational == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.gauss_exponent != other.gauss_exponent:
            raise ScalarExponentError(
                f"cannot add s^{self.gauss_exponent} and s^{other.gauss_exponent} terms"
            )
        return Scalar(self.rational + other.rational, self.gauss_exponent)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.rational, self.gauss_exponent)

    def __sub__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.coerce(other)
        return Scalar(self.rational * other.rational,
                      self.gauss_exponent + other.gauss_exponent)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar(self.rational / other.rational,
                      self.gauss_exponent - other.gauss_exponent)

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            raise TypeError("Scalar powers must be integers")
        if n < 0 and self.is_zero():
            raise ZeroDivisionError("negative power of zero Scalar")
        return Scalar(self.rational ** n, self.gauss_exponent * n)

    # -- comparison ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (self.rational == other.rational
                and self.gauss_exponent == other.gauss_exponent)

    def __hash__(self):
        return hash((self.rational, self.gauss_exponent))

    # -- printing -----------------------------------------------------

    def __str__(self) -> str:
        if self.gauss_exponent == 0:
            return str(self.rational)
        if self.gauss_exponent == 1:
            mark = "s"
        else:
            mark = f"s^{self.gauss_exponent}"
        if self.rational == 1:
            return mark
        if self.rational == -1:
            return f"-{mark}"
        return f"{self.rational} {mark}"

    def __repr__(self) -> str:
        return f"Scalar({self.rational!r}, {self.gauss_exponent})"


def _merge_indices(a: tuple[int, ...], b: tuple[int, ...]):
    """Merge two increasing index tuples; return (sign, merged) or None.

    The sign is that of sorting the concatenation a+b; a repeated index
    annihilates the product.
    """
    out = []
    i = j = 0
    sign = 1
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            # b[j] moves left past the len(a)-i remaining odd letters of a
            if (len(a) - i) % 2:
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


def _validate_index(idx: tuple[int, ...], count: int) -> tuple[int, ...]:
    idx = tuple(idx)
    if any(not isinstance(i, int) for i in idx):
        raise TypeError("generator indices must be integers")
    if any(i < 0 or i >= count for i in idx):
        raise DimensionError(f"generator index out of range for count {count}: {idx}")
    if any(idx[k] >= idx[k + 1] for k in range(len(idx) - 1)):
        raise ParityError(f"index tuple not strictly increasing: {idx}")
    return idx


class GrassmannElement:
    """Finite Scalar-linear combination of odd monomials over N generators."""

    __slots__ = ("generator_count", "terms")

    def __init__(self, generator_count: int, terms: Mapping[tuple[int, ...], object] = ()):
        if generator_count < 0:
            raise DimensionError("generator count must be nonnegative")
        normalized: dict[tuple[int, ...], Scalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for idx, coeff in items:
            idx = _validate_index(tuple(idx), generator_count)
            coeff = Scalar.coerce(coeff)
            if idx in normalized:
                coeff = normalized[idx] + coeff
            if coeff.is_zero():
                normalized.pop(idx, None)
            else:
                normalized[idx] = coeff
        object.__setattr__(self, "generator_count", generator_count)
        object.__setattr__(self, "terms", normalized)

    def __setattr__(self, name, value):
        raise AttributeError("GrassmannElement is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(generator_count: int) -> "GrassmannElement":
        return GrassmannElement(generator_count)

    @staticmethod
    def one(generator_count: int) -> "GrassmannElement":
        return GrassmannElement(generator_count, {(): Scalar.one()})

    @staticmethod
    def scalar(generator_count: int, value) -> "GrassmannElement":
        return GrassmannElement(generator_count, {(): Scalar.coerce(value)})

    @staticmethod
    def generator(generator_count: int, index: int) -> "GrassmannElement":
        return GrassmannElement(generator_count, {(index,): Scalar.one()})

    @staticmethod
    def monomial(generator_count: int, indices: Iterable[int], coeff=1) -> "GrassmannElement":
        return GrassmannElement(generator_count, {tuple(indices): Scalar.coerce(coeff)})

    # -- basic structure ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def body(self) -> Scalar:
        return self.terms.get((), Scalar.zero())

    def soul(self) -> "GrassmannElement":
        return GrassmannElement(
            self.generator_count,
            {i: c for i, c in self.terms.items() if i},
        )

    def even_part(self) -> "GrassmannElement":
        return GrassmannElement(
            self.generator_count,
            {i: c for i, c in self.terms.items() if len(i) % 2 == 0},
        )

    def odd_part(self) -> "GrassmannElement":
        return GrassmannElement(
            self.generator_count,
            {i: c for i, c in self.terms.items() if len(i) % 2 == 1},
        )

    def parity(self) -> Parity | None:
        """Parity if homogeneous; None for 0 or mixed elements."""
        if not self.terms:
            return None
        parities = {len(i) % 2 for i in self.terms}
        if len(parities) > 1:
            return None
        return Parity(parities.pop())

    def coefficient(self, indices: Iterable[int]) -> Scalar:
        return self.terms.get(tuple(indices), Scalar.zero())

    # -- arithmetic ---------------------------------------------------

    def _check_compatible(self, other: "GrassmannElement"):
        if self.generator_count != other.generator_count:
            raise DimensionError(
                "elements live over different generator counts "
                f"({self.generator_count} vs {other.generator_count}); embed first"
            )

    def __add__(self, other) -> "GrassmannElement":
        other = self._coerce(other)
        self._check_compatible(other)
        terms = dict(self.terms)
        for idx, coeff in other.terms.items():
            acc = terms.get(idx, Scalar.zero()) + coeff
            if acc.is_zero():
                terms.pop(idx, None)
            else:
                terms[idx] = acc
        return GrassmannElement(self.generator_count, terms)

    __radd__ = __add__

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement(
            self.generator_count, {i: -c for i, c in self.terms.items()}
        )

    def __sub__(self, other) -> "GrassmannElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "GrassmannElement":
        return self._coerce(other) + (-self)

    def _coerce(self, value) -> "GrassmannElement":
        if isinstance(value, GrassmannElement):
            return value
        if isinstance(value, (int, Fraction, Scalar)):
            return GrassmannElement.scalar(self.generator_count, value)
        raise TypeError(f"cannot interpret {value!r} as a GrassmannElement")

    def __mul__(self, other) -> "GrassmannElement":
        other = self._coerce(other)
        self._check_compatible(other)
        acc: dict[tuple[int, ...], Scalar] = {}
        for ia, ca in self.terms.items():
            for ib, cb in other.terms.items():
                merged = _merge_indices(ia, ib)
                if merged is None:
                    continue
                sign, idx = merged
                coeff = ca * cb
                if sign < 0:
                    coeff = -coeff
                prev = acc.get(idx)
                coeff = coeff if prev is None else prev + coeff
                if coeff.is_zero():
                    acc.pop(idx, None)
                else:
                    acc[idx] = coeff
        return GrassmannElement(self.generator_count, acc)

    def __rmul__(self, other) -> "GrassmannElement":
        # scalars are even and central, so this is safe
        return self._coerce(other) * self

    def inv_even(self) -> "GrassmannElement":
        """Inverse of an even element with invertible body.

        Uses body^-1 * sum_k (-body^-1 * soul)^k, which terminates because
        the soul is nilpotent of order at most N+1.
        """
        if self.odd_part():
            raise ParityError("inv_even requires an even element")
        b = self.body()
        if b.is_zero():
            raise NonInvertibleError("body is zero; element is not invertible")
        binv = Scalar.one() / b
        factor = -(self.soul() * binv)
        acc = GrassmannElement.one(self.generator_count)
        power = GrassmannElement.one(self.generator_count)
        for _ in range(self.generator_count):
            power = power * factor
            if power.is_zero():
                break
            acc = acc + power
        return acc * binv

    # -- reshaping ----------------------------------------------------

    def embed(self, new_count: int) -> "GrassmannElement":
        """View this element inside a larger algebra; indices unchanged."""
        if new_count < self.generator_count:
            raise DimensionError("cannot embed into a smaller algebra")
        return GrassmannElement(new_count, dict(self.terms))

    def map_indices(self, mapping, new_count: int) -> "GrassmannElement":
        """Relabel generators; mapping must be strictly increasing on each index tuple."""
        terms = {}
        for idx, coeff in self.terms.items():
            new_idx = tuple(mapping[i] for i in idx)
            terms[new_idx] = coeff
        return GrassmannElement(new_count, terms)

    # -- comparison / printing ----------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            other = self._coerce(other)
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return (self.generator_count == other.generator_count
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.generator_count, frozenset(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms, key=lambda i: (len(i), i)):
            coeff = self.terms[idx]
            mono = " ".join(f"xi{i + 1}" for i in idx)
            body = str(coeff)
            negative = body.startswith("-")
            if negative:
                body = body[1:]
            if mono:
                piece = mono if body == "1" else f"{body} {mono}"
            else:
                piece = body
            if not parts:
                parts.append(f"-{piece}" if negative else piece)
            else:
                parts.append(f"- {piece}" if negative else f"+ {piece}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"GrassmannElement({self.generator_count}, {self!s})"


# Functional aliases matching the operation names used throughout the docs.

def g_mul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a * b


def g_inv_even(a: GrassmannElement) -> GrassmannElement:
    return a.inv_even()


def g_body(a: GrassmannElement) -> Scalar:
    return a.body()


def g_soul(a: GrassmannElement) -> GrassmannElement:
    return a.soul()
