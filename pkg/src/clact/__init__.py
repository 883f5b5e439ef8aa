"""clact: generalized class groups of imaginary quadratic orders acting on
oriented elliptic curves with level structure, certified at desk scale."""

from .quadforms import (
    DomainError,
    FracIdeal,
    IdealClass,
    QuadIdeal,
    QuadOrder,
    class_group,
    ideals_of_norm,
    is_principal_with_generator,
    order_from_disc,
    reduced_forms,
    splitting_type,
)
from .congruence import (
    LAMBDA_FULL,
    LAMBDA_INT,
    LAMBDA_UNIT,
    EnumerationError,
    GenClassGroup,
    LambdaSet,
    Modulus,
    ResidueRing,
    exact_sequence_audit,
    in_congruence_subgroup,
    kernel_of_projection,
    lambda_powers,
    predicted_class_count,
    suborder_transport,
)
from .curvefield import (
    Curve,
    CurveError,
    Isogeny,
    InvalidKernel,
    TorsionUnavailable,
    curve_order,
    dlog_2d,
    supersingular_floor_set,
    torsion_basis,
    velu,
    weil_pairing,
)
from .oriented import (
    GAMMA_0,
    GAMMA_FULL,
    GAMMA_LAMBDA,
    GAMMA_TRIVIAL,
    GammaSpec,
    LevelContext,
    LevelledCurve,
    OrientedCurve,
    Orientation,
    act_on_curve,
    act_on_levelled,
    descending_kernels,
    frobenius_orientation,
    ideal_kernel,
    module_generators,
    ordinary_orientation,
)
from .lab import (
    Certificate,
    Scenario,
    build_scenario,
    build_volcano,
    certify_action,
    export_graph,
    preset_eigenvector,
    preset_fullgroup,
    preset_gpv,
    preset_nthpower,
    recheck,
    suborder_equivalence,
    ab_ideal_check,
    vectorize,
)

__version__ = "0.1.0"
