"""Entropy invariants of Cartan actions on tori.

From a totally real defining polynomial (or explicit commuting integer
matrices) this package computes fundamental unit systems and regulators,
the Fried average entropy with its exact and Monte Carlo ball volumes,
1- and l-entropies, slow entropy with the universal constant C(n), and
the analytic lower-bound curves, with a CLI over the same pipeline.
"""

__version__ = "0.1.0"

from .errors import (
    BoundViolation,
    CaseOError,
    DegenerateArrangement,
    DegenerateFacet,
    DegreeTooLarge,
    DeterminantNotUnit,
    DimensionTooLarge,
    EmptyResult,
    IdentityViolation,
    InconsistentDeterminants,
    InvalidInput,
    NonIntegerEntry,
    NonPositiveArgument,
    NotANorm,
    NotCommuting,
    NotSquarefree,
    NotTotallyReal,
    NotUnimodular,
    QuadratureNotConverged,
    RankDeficient,
    RatioOutOfRange,
    ReducibleCharPoly,
    SpanDeficient,
    ToolkitError,
    Unbounded,
    VerificationError,
    ZeroEigenvalue,
)
from .intpoly import (
    IntPolynomial,
    RealEmbeddings,
    discriminant,
    find_real_roots,
    format_polynomial,
    is_irreducible,
    parse_polynomial,
)
from .numberfield import (
    FieldElement,
    NumberField,
    UnitSystem,
    element_norm,
    fundamental_system,
    regulator,
    search_units,
)
from .cartan import (
    ActionCase,
    ActionDiagnostics,
    CartanAction,
    classify,
    entropy_of_element,
    from_unit_system,
    lyapunov_matrix,
    verify_action,
    weyl_chambers,
)
from .geometry import (
    HPolytope,
    VolumeEstimate,
    box_slab_volume,
    hrep_abs_sum,
    l1_slice_volume,
    mc_volume,
    polytope_volume,
    vertex_enumeration,
)
from .fried import (
    GROWTH_C,
    FriedReport,
    LEntropyResult,
    OneEntropyResult,
    entropy_ball_volume,
    exp_growth_bound,
    fried_average_entropy,
    fried_from_volume,
    full_report,
    l_entropy_lower_bound,
    l_entropy_search,
    one_entropy,
    regulator_of,
)
from .slow import (
    PolyhedralNorm,
    SlowReport,
    ball_volume,
    c_of_n,
    coefficient_objective,
    corollary_check,
    dual_norm,
    equal_coefficient_value,
    induced_polyhedral_norm,
    sh_for_norm,
    sh_functional,
    slow_entropy,
)
from .bounds import (
    BoundCurve,
    ScanResult,
    curve_csv,
    digamma,
    friedman_g,
    log_gamma,
    min_max_scan,
    zimmert_ab,
    zimmert_exp_lb,
    zimmert_fried_lb,
    zimmert_prefactor,
    zimmert_regulator_lb,
)
from .tables import (
    FIELD_ROWS,
    FieldRow,
    RowResult,
    compute_row,
    compute_table,
    render_table,
    unit_search_bound,
    unit_system_for,
)
