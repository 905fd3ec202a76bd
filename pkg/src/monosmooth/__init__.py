"""Moduli of smoothness and coefficient-class criteria for monotone
cosine series, with empirical verification of the underlying discrete
Hardy-type inequalities."""

__version__ = "0.1.0"

from .sequences import (
    DIVERGENT,
    CoefficientSequence,
    PowerLawTail,
    PowerLogTail,
    WeightedSumSpec,
    ZeroTail,
    make_power_law,
    make_power_log,
    make_random_monotone,
    validate_monotone,
    weighted_sum,
)
from .hardy import (
    LEMMA_IDS,
    HardyParams,
    RatioReport,
    SweepReport,
    estimate_constant,
    hardy_head_pair,
    hardy_tail_pair,
    inner_tail,
    verify_lemma,
)
from .smoothness import (
    ModulusCurve,
    QuadratureSpec,
    SmoothnessParams,
    bound_core,
    k_difference,
    lp_norm,
    modulus_bounds,
    modulus_curve,
    modulus_direct,
    synthesize,
)
from .besov import (
    ClassParams,
    CoreModulusSource,
    DirectModulusSource,
    MembershipReport,
    PhiSpec,
    coefficient_functional,
    discrete_seminorm,
    equivalence_report,
    integral_seminorm,
    membership_test,
    phi_eval,
    phi_validate,
)
