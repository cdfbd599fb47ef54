"""Built-in supergroup charts and worked quotient/product examples.

The small zoo used throughout the test suite and the command line:

* translation charts R^{m|n} under addition;
* the odd Heisenberg chart (z, t1, t2) with the symmetric cocycle
  z'' = z + z' + t1 t2' + t2 t1', so [Q1, Q2] = 2Z;
* the scaling-shift chart on (0, oo) x R^{0|1} with
  (a, b)(a', b') = (aa', b + ab'), the standard non-unimodular example:
  left density 1, right density a^-1;
* a GL(1|1) chart with coordinates (a, d | beta, gamma), the entries of
  [[a, beta], [gamma, d]] multiplied as supermatrices.

Each example bundle freezes a quotient section, compatible densities, a
test integrand and backends, so checks can be re-run verbatim from the
command line.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .berezin import (
    GAUSSIAN,
    BerezinSection,
    IntegrationBackend,
    box_backend,
)
from .superdomain import (
    POSITIVE,
    REALLINE,
    Polynomial,
    SuperDomainShape,
    SuperFunction,
    SuperMorphism,
    shape_product,
)
from .supergroup import (
    QuotientChartData,
    SubgroupSpec,
    SuperGroupChart,
    full_subgroup,
)


def _coord(shape, i, power=1):
    return SuperFunction.from_polynomial(
        shape, Polynomial.variable(shape.m, i, power))


def _odd(shape, j):
    return SuperFunction.odd_gen(shape, j)


def translation_group(m: int, n: int,
                      name: str | None = None) -> SuperGroupChart:
    shape = SuperDomainShape(m, tuple(REALLINE for _ in range(m)), n)
    prod = shape_product(shape, shape)
    mul = SuperMorphism(
        prod, shape,
        [_coord(prod, i) + _coord(prod, m + i) for i in range(m)],
        [_odd(prod, j) + _odd(prod, n + j) for j in range(n)])
    inv = SuperMorphism(
        shape, shape,
        [-_coord(shape, i) for i in range(m)],
        [-_odd(shape, j) for j in range(n)])
    return SuperGroupChart(name or f"translations of R^({m}|{n})",
                           shape, mul, (Fraction(0),) * m, inv)


def heisenberg_group() -> SuperGroupChart:
    shape = SuperDomainShape(1, (REALLINE,), 2)
    prod = shape_product(shape, shape)
    z = _coord(prod, 0) + _coord(prod, 1) \
        + _odd(prod, 0) * _odd(prod, 3) + _odd(prod, 1) * _odd(prod, 2)
    mul = SuperMorphism(prod, shape, [z],
                        [_odd(prod, 0) + _odd(prod, 2),
                         _odd(prod, 1) + _odd(prod, 3)])
    inv = SuperMorphism(shape, shape, [-_coord(shape, 0)],
                        [-_odd(shape, 0), -_odd(shape, 1)])
    return SuperGroupChart("odd Heisenberg chart", shape, mul,
                           (Fraction(0),), inv)


def multiplicative_line(name: str = "scaling line") -> SuperGroupChart:
    shape = SuperDomainShape(1, (POSITIVE,), 0)
    prod = shape_product(shape, shape)
    mul = SuperMorphism(prod, shape, [_coord(prod, 0) * _coord(prod, 1)], [])
    inv = SuperMorphism(shape, shape, [_coord(shape, 0, -1)], [])
    return SuperGroupChart(name, shape, mul, (Fraction(1),), inv)


def axb_group() -> SuperGroupChart:
    shape = SuperDomainShape(1, (POSITIVE,), 1)
    prod = shape_product(shape, shape)
    mul = SuperMorphism(
        prod, shape,
        [_coord(prod, 0) * _coord(prod, 1)],
        [_odd(prod, 0) + _coord(prod, 0) * _odd(prod, 1)])
    a_inv = _coord(shape, 0, -1)
    inv = SuperMorphism(shape, shape, [a_inv], [-(a_inv * _odd(shape, 0))])
    return SuperGroupChart("scaling-shift chart", shape, mul,
                           (Fraction(1),), inv)


def gl11_group() -> SuperGroupChart:
    shape = SuperDomainShape(2, (POSITIVE, POSITIVE), 2)
    prod = shape_product(shape, shape)
    # block entries of [[a, beta], [gamma, d]]; primes are the second factor
    a, d, a2, d2 = (_coord(prod, i) for i in range(4))
    beta, gamma, beta2, gamma2 = (_odd(prod, j) for j in range(4))
    mul = SuperMorphism(
        prod, shape,
        [a * a2 + beta * gamma2, d * d2 + gamma * beta2],
        [a * beta2 + beta * d2, gamma * a2 + d * gamma2])
    sa, sd = _coord(shape, 0), _coord(shape, 1)
    sbeta, sgamma = _odd(shape, 0), _odd(shape, 1)
    ia = _coord(shape, 0, -1)
    id_ = _coord(shape, 1, -1)
    soul = sbeta * sgamma
    inv = SuperMorphism(
        shape, shape,
        [ia + ia * ia * id_ * soul, id_ - ia * id_ * id_ * soul],
        [-(ia * id_ * sbeta), -(ia * id_ * sgamma)])
    return SuperGroupChart("GL(1|1) chart", shape, mul,
                           (Fraction(1), Fraction(1)), inv)


# ---------------------------------------------------------------------------
# subgroups


def axb_even_subgroup() -> SubgroupSpec:
    G = axb_group()
    H = multiplicative_line()
    emb = SuperMorphism(H.shape, G.shape, [_coord(H.shape, 0)],
                        [SuperFunction.zero(H.shape)])
    haar = BerezinSection.make(H.shape, _coord(H.shape, 0, -1),
                               basis_tag=("a",))
    return SubgroupSpec(G, H, emb, haar, name="scaling subgroup")


def axb_odd_subgroup() -> SubgroupSpec:
    G = axb_group()
    H = translation_group(0, 1, name="odd shifts")
    emb = SuperMorphism(H.shape, G.shape,
                        [SuperFunction.constant(H.shape, Fraction(1))],
                        [_odd(H.shape, 0)])
    haar = BerezinSection.make(H.shape, 1, basis_tag=("t",))
    return SubgroupSpec(G, H, emb, haar, name="odd shift subgroup")


def heisenberg_center() -> SubgroupSpec:
    G = heisenberg_group()
    H = translation_group(1, 0, name="centre line")
    emb = SuperMorphism(H.shape, G.shape, [_coord(H.shape, 0)],
                        [SuperFunction.zero(H.shape),
                         SuperFunction.zero(H.shape)])
    haar = BerezinSection.make(H.shape, 1, basis_tag=("z",))
    return SubgroupSpec(G, H, emb, haar, name="centre")


def line_odd_subgroup() -> SubgroupSpec:
    G = translation_group(1, 1)
    H = translation_group(0, 1, name="odd shifts")
    emb = SuperMorphism(H.shape, G.shape,
                        [SuperFunction.constant(H.shape, Fraction(0))],
                        [_odd(H.shape, 0)])
    haar = BerezinSection.make(H.shape, 1, basis_tag=("t",))
    return SubgroupSpec(G, H, emb, haar, name="odd shift subgroup")


# ---------------------------------------------------------------------------
# worked quotient examples


@dataclass(frozen=True)
class FubiniExample:
    name: str
    description: str
    group: SuperGroupChart
    subgroup: SubgroupSpec
    chart: QuotientChartData
    omega_group: BerezinSection
    test_function: SuperFunction
    backend: IntegrationBackend
    fibre_backend: IntegrationBackend | None = None
    base_backend: IntegrationBackend | None = None


def line_fubini_example() -> FubiniExample:
    spec = line_odd_subgroup()
    G = spec.parent
    base = SuperDomainShape(1, (REALLINE,), 0)
    section = SuperMorphism(base, G.shape, [_coord(base, 0)],
                            [SuperFunction.zero(base)])
    chart = QuotientChartData(
        section, BerezinSection.make(base, 1, basis_tag=("u",)),
        name="even line")
    x, xi = _coord(G.shape, 0), _odd(G.shape, 0)
    return FubiniExample(
        name="line-odd",
        description="translations of R^(1|1) over the odd shift subgroup",
        group=G, subgroup=spec, chart=chart,
        omega_group=BerezinSection.make(G.shape, 1),
        test_function=x * x * x * x + x * x * xi,
        backend=GAUSSIAN)


def heisenberg_fubini_example() -> FubiniExample:
    spec = heisenberg_center()
    G = spec.parent
    base = SuperDomainShape(0, (), 2)
    section = SuperMorphism(base, G.shape, [SuperFunction.zero(base)],
                            [_odd(base, 0), _odd(base, 1)])
    chart = QuotientChartData(
        section, BerezinSection.make(base, 1, basis_tag=("s1", "s2")),
        name="odd plane")
    z = _coord(G.shape, 0)
    top = _odd(G.shape, 0) * _odd(G.shape, 1)
    return FubiniExample(
        name="heisenberg-centre",
        description="odd Heisenberg chart over its centre",
        group=G, subgroup=spec, chart=chart,
        omega_group=BerezinSection.make(G.shape, 1),
        test_function=z * z + z * z * top,
        backend=GAUSSIAN)


def axb_fubini_example() -> FubiniExample:
    spec = axb_odd_subgroup()
    G = spec.parent
    base = SuperDomainShape(1, (POSITIVE,), 0)
    section = SuperMorphism(base, G.shape, [_coord(base, 0)],
                            [SuperFunction.zero(base)])
    chart = QuotientChartData(
        section,
        BerezinSection.make(base, _coord(base, 0, -1), basis_tag=("u",)),
        name="scaling base")
    a, b = _coord(G.shape, 0), _odd(G.shape, 0)
    box = box_backend((Fraction(1, 2), Fraction(2)))
    return FubiniExample(
        name="axb-odd",
        description="scaling-shift chart over its odd shift subgroup",
        group=G, subgroup=spec, chart=chart,
        omega_group=BerezinSection.make(G.shape, 1),
        test_function=a + a * b,
        backend=box,
        fibre_backend=box_backend(),
        base_backend=box)


def fubini_builtins() -> tuple[FubiniExample, ...]:
    return (line_fubini_example(), heisenberg_fubini_example(),
            axb_fubini_example())


# ---------------------------------------------------------------------------
# product-of-subgroups examples


@dataclass(frozen=True)
class ProductExample:
    name: str
    description: str
    group: SuperGroupChart
    left: SubgroupSpec
    right: SubgroupSpec
    omega_group: BerezinSection
    test_function: SuperFunction
    backend: IntegrationBackend
    product_backend: IntegrationBackend | None = None


def axb_product_example(order: str = "odd-even") -> ProductExample:
    G = axb_group()
    a, b = _coord(G.shape, 0), _odd(G.shape, 0)
    box = box_backend((Fraction(1, 2), Fraction(2)))
    if order == "odd-even":
        left, right = axb_odd_subgroup(), axb_even_subgroup()
    elif order == "even-odd":
        left, right = axb_even_subgroup(), axb_odd_subgroup()
    else:
        raise ValueError("order must be 'odd-even' or 'even-odd'")
    return ProductExample(
        name=f"axb-{order}",
        description=f"scaling-shift chart as the product {order} "
                    "of its two subgroups",
        group=G, left=left, right=right,
        omega_group=BerezinSection.make(G.shape, 1),
        test_function=a + a * b,
        backend=box, product_backend=box)


def product_builtins() -> tuple[ProductExample, ...]:
    return (axb_product_example("odd-even"), axb_product_example("even-odd"))


def builtin_groups() -> tuple[SuperGroupChart, ...]:
    return (translation_group(1, 1), heisenberg_group(), axb_group(),
            gl11_group())
