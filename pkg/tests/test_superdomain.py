"""Superfunction algebra, derivatives, pullbacks, Jacobians."""

import random
from fractions import Fraction

import pytest

from superberezin.errors import (
    DimensionError,
    DomainBoxError,
    NonInvertibleError,
    ParityError,
)
from superberezin.grassmann import EVEN, ODD, Scalar
from superberezin.superdomain import (
    Interval,
    POSITIVE,
    REALLINE,
    Polynomial,
    SuperDomainShape,
    SuperFunction,
    SuperMorphism,
    binomial_coefficient,
    box_samples,
    compose,
    jacobian,
    morphism_product,
    pair,
    projection,
    pullback,
    shape_product,
    split_product_function,
)

R12 = SuperDomainShape(1, (REALLINE,), 2)


def sf(shape, coeffs):
    return SuperFunction(shape, {
        idx: Polynomial(shape.m, terms) for idx, terms in coeffs.items()
    })


X = SuperFunction.coordinate(R12, 0)
XI1 = SuperFunction.odd_gen(R12, 0)
XI2 = SuperFunction.odd_gen(R12, 1)


class TestPolynomial:
    def test_laurent_product(self):
        p = Polynomial(1, {(-1,): 1}) * Polynomial(1, {(2,): 3})
        assert p == Polynomial(1, {(1,): 3})

    def test_monomial_inverse(self):
        p = Polynomial(1, {(2,): Fraction(3)})
        assert p.monomial_inverse() == Polynomial(1, {(-2,): Fraction(1, 3)})
        with pytest.raises(NonInvertibleError):
            (Polynomial.one(1) + Polynomial.variable(1, 0)).monomial_inverse()

    def test_derive_laurent(self):
        p = Polynomial(1, {(-1,): 1})
        assert p.derive(0) == Polynomial(1, {(-2,): -1})

    def test_evaluate(self):
        p = Polynomial(2, {(1, -1): 6})
        assert p.evaluate([Fraction(1, 2), Fraction(3)]) == Scalar(1)
        with pytest.raises(ZeroDivisionError):
            p.evaluate([1, 0])

    def test_binomial_coefficient(self):
        assert binomial_coefficient(4, 2) == 6
        assert binomial_coefficient(4, 5) == 0
        assert binomial_coefficient(-1, 3) == -1
        assert binomial_coefficient(-2, 2) == 3
        assert binomial_coefficient(Fraction(-1), 0) == 1


class TestSuperFunctionAlgebra:
    def test_product_even_odd(self):
        assert X * XI1 == sf(R12, {(0,): {(1,): 1}})

    def test_odd_square_vanishes(self):
        assert (XI1 * XI1).is_zero()

    def test_nilpotent_difference_of_squares(self):
        f = X + XI1 * XI2
        g = X - XI1 * XI2
        assert f * g == sf(R12, {(): {(2,): 1}})

    def test_parity(self):
        assert (X * XI1).parity() is ODD
        assert (X + XI1 * XI2).parity() is EVEN
        assert (X + XI1).parity() is None

    def test_inv_even(self):
        f = SuperFunction.one(R12) + XI1 * XI2
        finv = f.inv_even()
        assert f * finv == SuperFunction.one(R12)
        # Laurent body: x + xi1 xi2 inverts to x^-1 - x^-2 xi1 xi2
        g = X + XI1 * XI2
        ginv = g.inv_even()
        assert ginv == sf(R12, {(): {(-1,): 1}, (0, 1): {(-2,): -1}})
        assert g * ginv == SuperFunction.one(R12)

    def test_inv_even_requires_even(self):
        with pytest.raises(ParityError):
            (SuperFunction.one(R12) + XI1).inv_even()


class TestDerivatives:
    def test_even_derivative(self):
        f = sf(R12, {(0,): {(2,): 1}})  # x^2 xi1
        assert f.derive_even(0) == sf(R12, {(0,): {(1,): 2}})

    def test_left_odd_derivative(self):
        f = XI1 * XI2
        assert f.derive_odd(0) == XI2
        assert f.derive_odd(1) == -XI1

    def test_odd_derivatives_anticommute(self):
        shape = SuperDomainShape(1, (REALLINE,), 3)
        rng = random.Random(2)
        f = _random_function(rng, shape)
        for i in range(3):
            for j in range(3):
                assert (f.derive_odd(i).derive_odd(j)
                        == -(f.derive_odd(j).derive_odd(i)))

    def test_graded_leibniz(self):
        rng = random.Random(4)
        for _ in range(12):
            f = _random_function(rng, R12, homogeneous=True)
            g = _random_function(rng, R12)
            assert (f * g).derive_even(0) == f.derive_even(0) * g + f * g.derive_even(0)
            sign = -1 if f.parity() is ODD else 1
            lhs = (f * g).derive_odd(1)
            rhs = f.derive_odd(1) * g + Fraction(sign) * (f * g.derive_odd(1))
            assert lhs == rhs


def _random_function(rng, shape, homogeneous=False, max_terms=4):
    from itertools import combinations
    indices = []
    for size in range(shape.total_odd + 1):
        indices.extend(combinations(range(shape.total_odd), size))
    if homogeneous:
        par = rng.choice([0, 1])
        indices = [i for i in indices if len(i) % 2 == par]
    coeffs = {}
    for _ in range(rng.randint(1, max_terms)):
        idx = rng.choice(indices)
        exps = tuple(rng.randint(0, 2) for _ in range(shape.m))
        poly = coeffs.setdefault(idx, {})
        poly[exps] = poly.get(exps, 0) + rng.randint(-3, 3)
    return sf(shape, coeffs)


def _random_automorphism(rng, shape=R12):
    """Invertible-looking morphism: affine body, unit-triangular odd part."""
    a = rng.choice([1, 2, -1, Fraction(1, 2)])
    b = Fraction(rng.randint(-2, 2))
    c = Fraction(rng.randint(-2, 2))
    k = rng.randint(0, 2)
    even = (Fraction(a) * X + b
            + c * SuperFunction.coordinate(shape, 0, k) * XI1 * XI2)
    d = Fraction(rng.randint(-2, 2))
    odd1 = XI1 + d * SuperFunction.coordinate(shape, 0, rng.randint(0, 2)) * XI2
    e = rng.choice([1, -1, 2])
    odd2 = Fraction(e) * XI2
    return SuperMorphism(shape, shape, [even], [odd1, odd2])


class TestPullback:
    def test_identity(self):
        f = _random_function(random.Random(7), R12)
        assert pullback(SuperMorphism.identity(R12), f) == f

    def test_nilpotent_taylor(self):
        phi = SuperMorphism(R12, R12, [X + XI1 * XI2], [XI1, XI2])
        f = sf(R12, {(): {(2,): 1}})  # x^2
        assert pullback(phi, f) == sf(R12, {(): {(2,): 1}, (0, 1): {(1,): 2}})

    def test_odd_swap_sign(self):
        phi = SuperMorphism(R12, R12, [X], [XI2, XI1])
        f = XI1 * XI2
        assert pullback(phi, f) == -(XI1 * XI2)

    def test_negative_exponent_taylor(self):
        # pull x^-1 back along x -> 2x
        shape = SuperDomainShape(1, (POSITIVE,), 0)
        x = SuperFunction.coordinate(shape, 0)
        phi = SuperMorphism(shape, shape, [Fraction(2) * x], [])
        f = SuperFunction(shape, {(): Polynomial(1, {(-1,): 1})})
        assert pullback(phi, f) == SuperFunction(
            shape, {(): Polynomial(1, {(-1,): Fraction(1, 2)})})

    def test_negative_exponent_with_soul(self):
        # (x + xi1 xi2)^-1 via pullback of x^-1 along x -> x + xi1 xi2
        phi = SuperMorphism(R12, R12, [X + XI1 * XI2], [XI1, XI2])
        f = sf(R12, {(): {(-1,): 1}})
        assert pullback(phi, f) == sf(R12, {(): {(-1,): 1}, (0, 1): {(-2,): -1}})

    def test_algebra_morphism(self):
        rng = random.Random(9)
        for _ in range(10):
            phi = _random_automorphism(rng)
            f = _random_function(rng, R12)
            g = _random_function(rng, R12)
            assert pullback(phi, f * g) == pullback(phi, f) * pullback(phi, g)
            assert pullback(phi, f + g) == pullback(phi, f) + pullback(phi, g)

    def test_functoriality(self):
        rng = random.Random(11)
        for _ in range(8):
            phi = _random_automorphism(rng)
            psi = _random_automorphism(rng)
            f = _random_function(rng, R12)
            assert (pullback(compose(phi, psi), f)
                    == pullback(phi, pullback(psi, f)))

    def test_aux_parameters_pass_through(self):
        src = SuperDomainShape(1, (REALLINE,), 1, aux=2)
        tgt = SuperDomainShape(1, (REALLINE,), 1, aux=2)
        x = SuperFunction.coordinate(src, 0)
        xi = SuperFunction.odd_gen(src, 0)
        theta1 = SuperFunction.odd_gen(src, 1)  # first aux gen
        phi = SuperMorphism(src, tgt, [x], [xi + theta1])
        f = SuperFunction(tgt, {(0, 1): Polynomial.one(1)})  # xi*theta1 on target
        got = pullback(phi, f)
        # (xi + theta1)·theta1 = xi·theta1
        assert got == SuperFunction(src, {(0, 1): Polynomial.one(1)})


class TestCompose:
    def test_shift_then_scale(self):
        line = SuperDomainShape(1, (REALLINE,), 0)
        x = SuperFunction.coordinate(line, 0)
        shift = SuperMorphism(line, line, [x + 1], [])
        scale = SuperMorphism(line, line, [Fraction(2) * x], [])
        both = compose(shift, scale)
        assert both.even_components[0] == Fraction(2) * x + 2

    def test_compose_with_identity(self):
        rng = random.Random(13)
        phi = _random_automorphism(rng)
        assert compose(phi, SuperMorphism.identity(R12)) == phi
        assert compose(SuperMorphism.identity(R12), phi) == phi


class TestJacobian:
    def test_identity(self):
        J = jacobian(SuperMorphism.identity(R12))
        assert J == jacobian(SuperMorphism.identity(R12))
        assert J.berezinian() == SuperFunction.one(R12)

    def test_linear_scaling(self):
        shape = SuperDomainShape(1, (REALLINE,), 1)
        x = SuperFunction.coordinate(shape, 0)
        xi = SuperFunction.odd_gen(shape, 0)
        phi = SuperMorphism(shape, shape, [Fraction(3) * x], [xi])
        assert jacobian(phi).berezinian() == SuperFunction.constant(shape, 3)

    def test_shear_has_unit_berezinian(self):
        phi = SuperMorphism(R12, R12, [X + XI1 * XI2], [XI1, XI2])
        assert jacobian(phi).berezinian() == SuperFunction.one(R12)

    def test_chain_rule(self):
        rng = random.Random(17)
        for _ in range(8):
            phi = _random_automorphism(rng)
            psi = _random_automorphism(rng)
            lhs = jacobian(compose(phi, psi))
            rhs = jacobian(phi) * jacobian(psi).map_entries(lambda f: pullback(phi, f))
            assert lhs == rhs

    def test_berezinian_chain_rule(self):
        rng = random.Random(19)
        for _ in range(8):
            phi = _random_automorphism(rng)
            psi = _random_automorphism(rng)
            lhs = jacobian(compose(phi, psi)).berezinian()
            rhs = pullback(phi, jacobian(psi).berezinian()) * jacobian(phi).berezinian()
            assert lhs == rhs


class TestProductsAndSplits:
    def test_split_reassembles(self):
        left = SuperDomainShape(1, (REALLINE,), 1)
        right = SuperDomainShape(1, (REALLINE,), 1)
        prod = shape_product(left, right)
        rng = random.Random(23)
        f = _random_function(rng, prod)
        total = SuperFunction.zero(prod)
        for fl, fr in split_product_function(f, left, right):
            total = total + fl.embed(prod, 0, 0) * fr.embed(prod, left.m, left.n)
        assert total == f

    def test_projection_and_pair(self):
        s = SuperDomainShape(1, (REALLINE,), 1)
        prod = shape_product(s, s)
        p1 = projection(s, s, 1)
        p2 = projection(s, s, 2)
        both = pair(p1, p2)
        assert both == SuperMorphism.identity(prod)

    def test_morphism_product_of_identities(self):
        s = SuperDomainShape(1, (REALLINE,), 1)
        ident = SuperMorphism.identity(s)
        assert morphism_product(ident, ident) == SuperMorphism.identity(
            shape_product(s, s))


class TestBoxes:
    def test_box_samples_interval(self):
        pts = box_samples((Interval(0, 1),), 3)
        assert pts == [(Fraction(0),), (Fraction(1, 2),), (Fraction(1),)]

    def test_containment_check_passes(self):
        shape = SuperDomainShape(1, (Interval(0, 1),), 0)
        x = SuperFunction.coordinate(shape, 0)
        half = SuperMorphism(shape, shape, [Fraction(1, 2) * x], [])
        assert "sampled" in half.check_body_box()

    def test_containment_check_fails(self):
        shape = SuperDomainShape(1, (Interval(0, 1),), 0)
        x = SuperFunction.coordinate(shape, 0)
        double = SuperMorphism(shape, shape, [Fraction(2) * x], [])
        with pytest.raises(DomainBoxError):
            double.check_body_box()

    def test_positive_axis(self):
        shape = SuperDomainShape(1, (POSITIVE,), 0)
        x = SuperFunction.coordinate(shape, 0)
        inv = SuperMorphism(shape, shape, [SuperFunction(
            shape, {(): Polynomial(1, {(-1,): 1})})], [])
        assert inv.check_body_box() is not None
