"""Berezin sections, exact integration backends, fibre integration.

Expected values are frozen by hand before the implementation: Berezin
integrals extract the top odd coefficient, even integrals come from the
Gaussian moment table (odd moments zero, even moment k is (k-1)!! s with
s = sqrt(2 pi)) or from rational antiderivatives on boxes.
"""

from fractions import Fraction

import pytest

from superberezin import (
    GAUSSIAN,
    EVEN,
    ODD,
    BerezinSection,
    DomainBoxError,
    FibreTerm,
    GrassmannElement,
    Interval,
    NonInvertibleError,
    NonIntegrableError,
    OrientationError,
    Polynomial,
    POSITIVE,
    REALLINE,
    Scalar,
    StructureError,
    SuperDomainShape,
    SuperFunction,
    SuperMorphism,
    box_backend,
    fibre_integrate,
    fibre_integrate_section,
    fibre_integrate_with_support,
    function_times_section,
    integrate,
    product_section,
    pullback_section,
    shape_product,
    split_section,
)

BOX01 = SuperDomainShape(1, (Interval(0, 1),), 0)
LINE = SuperDomainShape(1, (REALLINE,), 0)


def gauss_shape(m: int, n: int) -> SuperDomainShape:
    return SuperDomainShape(m, (REALLINE,) * m, n)


# ---------------------------------------------------------------------------
# integrate


def test_pure_berezin_integral():
    # D(xi) (3 + 5 xi) -> 5
    shape = SuperDomainShape(0, (), 1)
    rho = SuperFunction(shape, {(): Polynomial.constant(0, 3),
                                (0,): Polynomial.constant(0, 5)})
    omega = BerezinSection.make(shape, rho)
    assert integrate(omega, box_backend()) == Scalar(5)
    # the backend is idle for m = 0, so gaussian agrees
    assert integrate(omega, GAUSSIAN) == Scalar(5)


def test_gaussian_one_one_with_sign():
    # D(x, xi) (xi x^2) -> (-1)^{1*1} * s = -s
    shape = gauss_shape(1, 1)
    rho = SuperFunction(shape, {(0,): Polynomial.variable(1, 0, 2)})
    omega = BerezinSection.make(shape, rho)
    assert integrate(omega, GAUSSIAN) == Scalar(-1, 1)


def test_box_classical_integral():
    # D(x) x on [0,1] -> 1/2
    omega = BerezinSection.make(BOX01, SuperFunction.coordinate(BOX01, 0))
    assert integrate(omega, box_backend()) == Scalar(Fraction(1, 2))


def test_gaussian_moments_table():
    # moment 0 -> s, odd moments -> 0, moment 4 -> 3 s
    for power, expected in [(0, Scalar(1, 1)), (1, Scalar(0)),
                            (3, Scalar(0)), (4, Scalar(3, 1))]:
        omega = BerezinSection.make(
            LINE, SuperFunction.coordinate(LINE, 0, power) if power
            else SuperFunction.one(LINE))
        assert integrate(omega, GAUSSIAN) == expected


def test_gaussian_two_two():
    # D(x1,x2,xi1,xi2) (x1^2 x2^4 xi1 xi2) -> (+1) * s * 3s = 3 s^2
    shape = gauss_shape(2, 2)
    poly = Polynomial(2, {(2, 4): Scalar.one()})
    rho = SuperFunction(shape, {(0, 1): poly})
    assert integrate(BerezinSection.make(shape, rho), GAUSSIAN) == Scalar(3, 2)


def test_zero_top_coefficient_vanishes():
    shape = gauss_shape(1, 1)
    omega = BerezinSection.make(shape, SuperFunction.coordinate(shape, 0))
    assert integrate(omega, GAUSSIAN) == Scalar(0)


def test_aux_parameters_are_spectators():
    # D(xi)(xi + 2 xi theta) -> 1 + 2 theta as a Grassmann element
    shape = SuperDomainShape(0, (), 1, aux=1)
    rho = SuperFunction(shape, {(0,): Polynomial.one(0),
                                (0, 1): Polynomial.constant(0, 2)})
    value = integrate(BerezinSection.make(shape, rho), box_backend())
    assert value == GrassmannElement(1, {(): Scalar(1), (0,): Scalar(2)})


def test_laurent_box_integral():
    # D(x) x^{-2} on [1,2] -> 1/2
    shape = SuperDomainShape(1, (Interval(1, 2),), 0)
    omega = BerezinSection.make(shape, SuperFunction.coordinate(shape, 0, -2))
    assert integrate(omega, box_backend()) == Scalar(Fraction(1, 2))
    # same on a positive half-line axis with an explicit box
    half = SuperDomainShape(1, (POSITIVE,), 0)
    omega2 = BerezinSection.make(half, SuperFunction.coordinate(half, 0, -2))
    assert integrate(omega2, box_backend((1, 2))) == Scalar(Fraction(1, 2))


def test_non_integrable_cases():
    shape = SuperDomainShape(1, (Interval(1, 2),), 0)
    log_case = BerezinSection.make(shape, SuperFunction.coordinate(shape, 0, -1))
    with pytest.raises(NonIntegrableError):
        integrate(log_case, box_backend())
    straddle = SuperDomainShape(1, (Interval(-1, 1),), 0)
    pole = BerezinSection.make(straddle, SuperFunction.coordinate(straddle, 0, -2))
    with pytest.raises(NonIntegrableError):
        integrate(pole, box_backend())
    with pytest.raises(NonIntegrableError):
        integrate(BerezinSection.make(LINE, SuperFunction.coordinate(LINE, 0, -2)),
                  GAUSSIAN)


def test_backend_axis_mismatches():
    # gaussian needs whole-line axes; the box backend needs bounded ones
    boxed = BerezinSection.make(BOX01, SuperFunction.one(BOX01))
    with pytest.raises(DomainBoxError):
        integrate(boxed, GAUSSIAN)
    unbounded = BerezinSection.make(LINE, SuperFunction.one(LINE))
    with pytest.raises(DomainBoxError):
        integrate(unbounded, box_backend())
    # explicit box must sit inside the axes
    with pytest.raises(DomainBoxError):
        integrate(boxed, box_backend((0, 2)))
    half = SuperDomainShape(1, (POSITIVE,), 0)
    with pytest.raises(DomainBoxError):
        integrate(BerezinSection.make(half, SuperFunction.one(half)),
                  box_backend((-1, 1)))


def test_integrate_is_linear():
    shape = gauss_shape(1, 2)
    rho1 = SuperFunction(shape, {(0, 1): Polynomial.variable(1, 0, 2)})
    rho2 = SuperFunction(shape, {(0, 1): Polynomial.one(1), (0,): Polynomial.one(1)})
    w1 = BerezinSection.make(shape, rho1)
    w2 = BerezinSection.make(shape, rho2)
    combo = BerezinSection.make(shape, 3 * rho1 - rho2)
    assert integrate(combo, GAUSSIAN) == \
        3 * integrate(w1, GAUSSIAN) - integrate(w2, GAUSSIAN)


# ---------------------------------------------------------------------------
# pullback_section


def test_pullback_identity():
    shape = SuperDomainShape(1, (Interval(0, 1),), 2)
    rho = SuperFunction(shape, {(0, 1): Polynomial.variable(1, 0)})
    omega = BerezinSection.make(shape, rho)
    back = pullback_section(SuperMorphism.identity(shape), omega)
    assert back.density == rho
    assert back.shape == shape


def test_pullback_classical_substitution():
    # x -> 2x from [0,1] onto [0,2]; density 1 becomes density 2
    source = SuperDomainShape(1, (Interval(0, 1),), 0)
    target = SuperDomainShape(1, (Interval(0, 2),), 0)
    phi = SuperMorphism(source, target,
                        [2 * SuperFunction.coordinate(source, 0)], [])
    omega = BerezinSection.make(target, SuperFunction.one(target))
    back = pullback_section(phi, omega)
    assert back.density == SuperFunction.constant(source, 2)
    assert integrate(back, box_backend()) == integrate(omega, box_backend())


def test_pullback_nilpotent_shear_preserves_integral():
    # (x, xi1, xi2) -> (x + xi1 xi2, xi1, xi2); boundary-vanishing body part
    shape = SuperDomainShape(1, (Interval(0, 1),), 2)
    x = SuperFunction.coordinate(shape, 0)
    xi1, xi2 = SuperFunction.odd_gen(shape, 0), SuperFunction.odd_gen(shape, 1)
    phi = SuperMorphism(shape, shape, [x + xi1 * xi2], [xi1, xi2])
    rho = (x * x * (1 - x) * (1 - x)) + x * xi1 * xi2
    omega = BerezinSection.make(shape, rho)
    back = pullback_section(phi, omega)
    deriv = Polynomial(1, {(1,): Scalar(2), (2,): Scalar(-6), (3,): Scalar(4)})
    assert back.density == rho + SuperFunction(shape, {(0, 1): deriv})
    assert integrate(back, box_backend()) == integrate(omega, box_backend())
    assert integrate(omega, box_backend()) == Scalar(Fraction(1, 2))


def test_pullback_rejects_orientation_reversal():
    source = SuperDomainShape(1, (Interval(0, 1),), 0)
    target = SuperDomainShape(1, (Interval(-1, 0),), 0)
    phi = SuperMorphism(source, target,
                        [-SuperFunction.coordinate(source, 0)], [])
    omega = BerezinSection.make(target, SuperFunction.one(target))
    with pytest.raises(OrientationError):
        pullback_section(phi, omega)


def test_pullback_rejects_escaping_body():
    source = SuperDomainShape(1, (Interval(0, 2),), 0)
    target = SuperDomainShape(1, (Interval(0, 1),), 0)
    phi = SuperMorphism(source, target,
                        [SuperFunction.coordinate(source, 0)], [])
    omega = BerezinSection.make(target, SuperFunction.one(target))
    with pytest.raises(DomainBoxError):
        pullback_section(phi, omega)


def test_pullback_rejects_degenerate_odd_block():
    shape = SuperDomainShape(0, (), 1)
    phi = SuperMorphism(shape, shape, [], [SuperFunction.zero(shape)])
    omega = BerezinSection.make(shape, SuperFunction.odd_gen(shape, 0))
    with pytest.raises(NonInvertibleError):
        pullback_section(phi, omega)


def test_pullback_odd_reflection_is_exact():
    # xi -> -xi has Berezinian -1; the transported integral still matches
    shape = SuperDomainShape(0, (), 1)
    phi = SuperMorphism(shape, shape, [], [-SuperFunction.odd_gen(shape, 0)])
    rho = SuperFunction(shape, {(): Polynomial.constant(0, 3),
                                (0,): Polynomial.constant(0, 5)})
    omega = BerezinSection.make(shape, rho)
    back = pullback_section(phi, omega)
    assert back.density == SuperFunction(
        shape, {(): Polynomial.constant(0, -3), (0,): Polynomial.constant(0, 5)})
    assert integrate(back, box_backend()) == integrate(omega, box_backend())


# ---------------------------------------------------------------------------
# products and the (*) sign


def _factor_sections():
    b = SuperDomainShape(0, (), 1)
    f = SuperDomainShape(0, (), 1)
    w1 = BerezinSection.make(
        b, SuperFunction(b, {(): Polynomial.one(0), (0,): Polynomial.constant(0, 2)}),
        basis_tag=("xi",))
    w2 = BerezinSection.make(
        f, SuperFunction(f, {(): Polynomial.constant(0, 3),
                             (0,): Polynomial.constant(0, 5)}),
        basis_tag=("eta",))
    return b, f, w1, w2


def test_product_section_odd_odd_signs():
    # D(xi)(1+2xi) x D(eta)(3+5eta): odd left parts pick up (-1)^{q}
    b, f, w1, w2 = _factor_sections()
    prod = product_section(w1, w2)
    expected = SuperFunction(
        shape_product(b, f),
        {(): Polynomial.constant(0, 3), (1,): Polynomial.constant(0, 5),
         (0,): Polynomial.constant(0, -6), (0, 1): Polynomial.constant(0, -10)})
    assert prod.density == expected
    assert prod.basis_tag == ("xi", "eta")
    # (*): integral = (-1)^{(m+n) q} * product of factor integrals
    assert integrate(prod, box_backend()) == Scalar(-10)
    assert integrate(w1, box_backend()) * integrate(w2, box_backend()) == Scalar(10)


def test_product_section_plain_when_no_sign():
    # n = 0 and q = 0: densities multiply with no sign
    b = SuperDomainShape(1, (Interval(0, 1),), 0)
    f = SuperDomainShape(0, (), 1)
    w1 = BerezinSection.make(b, SuperFunction.coordinate(b, 0), basis_tag=("t",))
    w2 = BerezinSection.make(
        f, SuperFunction(f, {(): Polynomial.constant(0, 3),
                             (0,): Polynomial.constant(0, 5)}),
        basis_tag=("eta",))
    prod = product_section(w1, w2)
    x = SuperFunction.coordinate(prod.shape, 0)
    eta = SuperFunction.odd_gen(prod.shape, 0)
    assert prod.density == 3 * x + 5 * x * eta
    # sign check: (m+n) q = 1, so the product integral flips sign
    assert integrate(prod, box_backend()) == Scalar(Fraction(-5, 2))


def test_product_section_name_collision():
    b, f, w1, _ = _factor_sections()
    clash = BerezinSection.make(f, SuperFunction.one(f), basis_tag=("xi",))
    with pytest.raises(StructureError):
        product_section(w1, clash)


def test_gaussian_product_star_sign_sample():
    # (m,n,p,q) = (1,1,0,1): sign (-1)^{(1+1)*1} = +1
    b = gauss_shape(1, 1)
    f = gauss_shape(0, 1)
    w1 = BerezinSection.make(
        b, SuperFunction(b, {(0,): Polynomial.variable(1, 0, 2)}),
        basis_tag=("x", "xi"))
    w2 = BerezinSection.make(
        f, SuperFunction(f, {(0,): Polynomial.constant(0, 7)}),
        basis_tag=("eta",))
    prod = product_section(w1, w2)
    lhs = integrate(prod, GAUSSIAN)
    rhs = integrate(w1, GAUSSIAN) * integrate(w2, GAUSSIAN)
    assert lhs == rhs == Scalar(-7, 1)


# ---------------------------------------------------------------------------
# function_times_section


def test_function_times_section_odd_sign():
    shape = SuperDomainShape(0, (), 1)
    omega = BerezinSection.make(shape, SuperFunction.one(shape))
    xi = SuperFunction.odd_gen(shape, 0)
    scaled = function_times_section(xi, omega)
    assert scaled.density == -xi
    assert integrate(scaled, box_backend()) == Scalar(-1)


def test_function_times_section_even_plain():
    omega = BerezinSection.make(BOX01, SuperFunction.one(BOX01))
    x = SuperFunction.coordinate(BOX01, 0)
    assert function_times_section(x, omega).density == x


def test_function_times_section_is_associative_with_product():
    # f (g omega) = (f g) omega including odd factors
    shape = SuperDomainShape(1, (Interval(0, 1),), 2)
    omega = BerezinSection.make(
        shape, SuperFunction.one(shape) + SuperFunction.odd_gen(shape, 0))
    f = SuperFunction.odd_gen(shape, 1) + SuperFunction.coordinate(shape, 0)
    g = SuperFunction.odd_gen(shape, 0)
    lhs = function_times_section(f, function_times_section(g, omega))
    rhs = function_times_section(f * g, omega)
    assert lhs.density == rhs.density


# ---------------------------------------------------------------------------
# splitting and fibre integration


def test_split_section_signs():
    b, f, w1, w2 = _factor_sections()
    prod = product_section(w1, w2)
    pairs = split_section(prod, b, f)
    # base monomials 1 and xi; the odd one carries (-1)^{np + q} = -1
    as_dict = {}
    for fn, sec in pairs:
        key = max(fn.coeffs)  # the single monomial index of the base factor
        as_dict[key] = (fn, sec.density)
    one_fn, one_density = as_dict[()]
    xi_fn, xi_density = as_dict[(0,)]
    assert one_fn == SuperFunction.one(b)
    assert one_density == SuperFunction(
        f, {(): Polynomial.constant(0, 3), (0,): Polynomial.constant(0, 5)})
    assert xi_fn == -SuperFunction.odd_gen(b, 0)
    assert xi_density == SuperFunction(
        f, {(): Polynomial.constant(0, -6), (0,): Polynomial.constant(0, -10)})


def test_fibre_integrate_frozen():
    b, f, w1, w2 = _factor_sections()
    prod = product_section(w1, w2)
    result = fibre_integrate(split_section(prod, b, f), b, f, box_backend())
    assert result == SuperFunction(
        b, {(): Polynomial.constant(0, 5), (0,): Polynomial.constant(0, 10)})


def test_fibre_integration_identity():
    # int over B x F = (-1)^{(m+n) q} int over B of the fibre integral
    b, f, w1, w2 = _factor_sections()
    prod = product_section(w1, w2)
    pushed = fibre_integrate_section(prod, b, f, box_backend())
    assert pushed.shape == b
    assert integrate(pushed, box_backend()) == Scalar(10)
    assert integrate(prod, box_backend()) == Scalar(-10)  # sign (-1)^{(0+1)*1}


def test_fibre_integrate_module_rule_frozen():
    b, f, w1, w2 = _factor_sections()
    terms = split_section(product_section(w1, w2), b, f)
    h = SuperFunction.odd_gen(b, 0)
    lhs = fibre_integrate([(h * fn, sec) for fn, sec in terms], b, f, box_backend())
    rhs = h * fibre_integrate(terms, b, f, box_backend())
    assert lhs == rhs == SuperFunction(b, {(0,): Polynomial.constant(0, 5)})


def test_section_level_module_rule():
    # p_!(p^* h . omega) = h . p_!(omega) with all D-symbol signs live
    base = SuperDomainShape(1, (Interval(0, 1),), 1)
    fibre = SuperDomainShape(1, (Interval(0, 1),), 1)
    total = shape_product(base, fibre)
    x = SuperFunction.coordinate(total, 0)
    y = SuperFunction.coordinate(total, 1)
    xi = SuperFunction.odd_gen(total, 0)
    eta = SuperFunction.odd_gen(total, 1)
    rho = x * y + xi * eta + y * y * xi + x * eta + 1
    omega = BerezinSection.make(total, rho,
                                basis_tag=("x", "y", "xi", "eta"))
    h = SuperFunction.coordinate(base, 0) + SuperFunction.odd_gen(base, 0)
    h_up = h.embed(total, 0, 0)
    lhs = fibre_integrate_section(function_times_section(h_up, omega),
                                  base, fibre, box_backend())
    rhs = function_times_section(h, fibre_integrate_section(
        omega, base, fibre, box_backend()))
    assert lhs.density == rhs.density


def test_fibre_support_containment():
    base = SuperDomainShape(1, (Interval(0, 1),), 0)
    fibre = SuperDomainShape(0, (), 1)
    eta = SuperFunction.odd_gen(fibre, 0)
    live = FibreTerm(SuperFunction.coordinate(base, 0),
                     BerezinSection.make(fibre, eta),
                     base_support=(Interval(0, Fraction(1, 2)),))
    dead = FibreTerm(SuperFunction.coordinate(base, 0, 2),
                     BerezinSection.make(fibre, SuperFunction.one(fibre)),
                     base_support=(Interval(Fraction(1, 2), 1),))
    value, support = fibre_integrate_with_support([live, dead], base, fibre,
                                                  box_backend())
    assert value == SuperFunction.coordinate(base, 0)
    declared = {live.base_support, dead.base_support}
    assert support <= declared
    assert support == {live.base_support}


def test_fibrewise_shear_invariance():
    # fibre-preserving isomorphism over the base leaves p_! unchanged
    base = SuperDomainShape(0, (), 2)
    fibre = SuperDomainShape(1, (Interval(0, 1),), 0)
    total = shape_product(base, fibre)
    y = SuperFunction.coordinate(total, 0)
    xi1 = SuperFunction.odd_gen(total, 0)
    xi2 = SuperFunction.odd_gen(total, 1)
    phi = SuperMorphism(total, total, [y + 3 * xi1 * xi2], [xi1, xi2])
    # fibre profile vanishes at the fibre-box boundary
    bump = y * y * (1 - y) * (1 - y)
    rho = bump + y * xi1 + xi2 + bump * xi1 * xi2
    omega = BerezinSection.make(total, rho)
    lhs = fibre_integrate_section(pullback_section(phi, omega), base, fibre,
                                  box_backend())
    rhs = fibre_integrate_section(omega, base, fibre, box_backend())
    assert lhs.density == rhs.density


# ---------------------------------------------------------------------------
# seeded verification suites


def test_change_of_variables_suite_all_pass():
    from superberezin.suites import change_of_variables_suite
    lines = change_of_variables_suite(seed=7, cases=16)
    bad = [line.render() for line in lines if not line.passed]
    assert not bad, bad


def test_fubini_sign_grid_small():
    from superberezin.suites import fubini_sign_grid_suite
    lines = fubini_sign_grid_suite(seed=3, dims=(0, 1))
    bad = [line.render() for line in lines if not line.passed]
    assert not bad, bad


def test_module_rule_suite_sample():
    from superberezin.suites import module_rule_suite, support_containment_suite
    bad = [line.render() for line in module_rule_suite(seed=5, cases=12)
           if not line.passed]
    bad += [line.render() for line in support_containment_suite(seed=5, cases=6)
            if not line.passed]
    assert not bad, bad
