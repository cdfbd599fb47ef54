"""Exact Berezin calculus: Grassmann algebras, Berezinians, super integration."""

from .errors import (
    SuperBerezinError,
    DimensionError,
    ParityError,
    ScalarExponentError,
    NonInvertibleError,
    DomainBoxError,
    OrientationError,
    NonIntegrableError,
    InconclusiveError,
    StructureError,
    NormalizationError,
    ParseError,
)
from .grassmann import Parity, EVEN, ODD, Scalar, GrassmannElement, koszul_sign
from .supermatrix import (
    SuperMatrix,
    berezinian,
    supertrace,
    canonical_pairing,
    homological_berezinian,
)
from .superdomain import (
    Axis,
    Interval,
    REALLINE,
    POSITIVE,
    SuperDomainShape,
    shape_product,
    Polynomial,
    SuperFunction,
    SuperMorphism,
    pullback,
    compose,
    pair,
    projection,
    morphism_product,
    jacobian,
    jacobian_rows,
    split_product_function,
    box_samples,
)
from .berezin import (
    BerezinSection,
    FibreTerm,
    GAUSSIAN,
    IntegrationBackend,
    box_backend,
    default_basis_tag,
    fibre_integrate,
    fibre_integrate_section,
    fibre_integrate_with_support,
    function_times_section,
    integrate,
    product_section,
    pullback_section,
    split_section,
)
from .lie_super import (
    LieSuperAlgebra,
    SubalgebraSpec,
    UnimodularityResult,
    ValidationReport,
    abelian_algebra,
    ad,
    adapt_basis,
    change_basis,
    gl11_algebra,
    unimodularity_check,
    validate,
)
from .supergroup import (
    FubiniReport,
    InvariantDensityResult,
    ProductFormulaReport,
    QuotientChartData,
    SubgroupSpec,
    SuperGroupChart,
    check_subgroup,
    fubini_check,
    full_subgroup,
    group_lie_algebra,
    modular_berezinian,
    product_formula_check,
    solve_invariant_density,
    trivialization,
    validate_group,
)
from .groups import (
    FubiniExample,
    ProductExample,
    axb_even_subgroup,
    axb_fubini_example,
    axb_group,
    axb_odd_subgroup,
    axb_product_example,
    builtin_groups,
    fubini_builtins,
    gl11_group,
    heisenberg_center,
    heisenberg_fubini_example,
    heisenberg_group,
    line_fubini_example,
    line_odd_subgroup,
    multiplicative_line,
    product_builtins,
    translation_group,
)
from .textio import (
    format_structure_constants,
    format_superfunction,
    format_supermatrix,
    parse_grassmann,
    parse_scalar,
    parse_structure_constants,
    parse_superfunction,
    parse_supermatrix,
)
