"""Stieltjes integral means, maximization envelopes, and growth-scale duality."""

from .func1d import (
    Domain,
    Envelope,
    Function1D,
    GridSpec,
    Tail,
    classify_monotonicity,
    envelope_function,
    evaluate,
    left_maximization,
    right_maximization,
)
from .stieltjes import (
    MeanValue,
    Measure1D,
    QuadratureConfig,
    identity_measure,
    integral_mean,
    log_measure,
    mean_partial_R,
    mean_partial_r,
    stieltjes_integral,
)
from .transforms import (
    Q_from_d,
    TransformResult,
    WeightN,
    d_from_Q,
    decreasing_majorant_mean,
    weighted_double_envelope,
)
from .verify import (
    DecaySchedule,
    VerifyReport,
    check_corollary_bounds,
    check_majorant_inequality,
    check_mean_monotonicity,
    check_pointwise_mean_bound,
    check_sup_identity,
    estimate_decay,
    finite_difference_check,
)

__all__ = [
    "Domain",
    "Envelope",
    "Function1D",
    "GridSpec",
    "Tail",
    "classify_monotonicity",
    "envelope_function",
    "evaluate",
    "left_maximization",
    "right_maximization",
    "MeanValue",
    "Measure1D",
    "QuadratureConfig",
    "identity_measure",
    "integral_mean",
    "log_measure",
    "mean_partial_R",
    "mean_partial_r",
    "stieltjes_integral",
    "Q_from_d",
    "TransformResult",
    "WeightN",
    "d_from_Q",
    "decreasing_majorant_mean",
    "weighted_double_envelope",
    "DecaySchedule",
    "VerifyReport",
    "check_corollary_bounds",
    "check_majorant_inequality",
    "check_mean_monotonicity",
    "check_pointwise_mean_bound",
    "check_sup_identity",
    "estimate_decay",
    "finite_difference_check",
]

__version__ = "0.1.0"
