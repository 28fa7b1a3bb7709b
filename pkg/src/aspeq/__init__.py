"""aspeq: expected utility and its mirror image, computed together.

A normalized utility on a bounded interval has the same shape as a CDF,
and reading it as one turns every expected-utility question into a twin
question with the roles of lottery and preference swapped. This package
computes both sides at once: expected utility and disutility, certain
and aspiration equivalents, effective-curvature solving, target
delegation, lottery-to-recipient allocation by saddle points, Taylor and
cumulant approximations, and dominance orderings, plus a deterministic
scenario-file CLI.
"""

from .approximations import (
    ApproxReport,
    CumulantSeries,
    CurvatureError,
    SeriesDivergenceWarning,
    ae_cumulant_series,
    ae_taylor2,
    ce_taylor2,
    risk_tolerance,
    spread_tolerance,
)
from .curves import (
    CURVE_KINDS,
    Curve,
    CurveError,
    CurveParameterError,
    DomainError,
    ExponentialNormalized,
    Linear,
    LogWealth,
    PiecewiseLinear,
    ScaledBeta,
    SingularDensityError,
    Step,
    StepFunctionError,
    Triangular,
    TruncatedGaussian,
    Uniform,
)
from .delegation import (
    AspirationChoice,
    DesiderataReport,
    RuleOutcome,
    TargetUpdate,
    choose_by_aspiration,
    choose_by_eu,
    desiderata_report,
    update_target,
)
from .dominance import (
    ChainReport,
    DominanceVerdict,
    ImplicationReport,
    LotteryMargins,
    dominance_implications,
    exponential_chain,
    first_moment_by_equal_areas,
    first_order_dominates,
    second_order_dominates,
)
from .duality import (
    DomainMismatchError,
    DualityResult,
    UnattainableTargetError,
    aspiration_equivalent,
    certain_equivalent,
    effective_gamma,
    evaluate_pair,
    exceedance_probability,
    expected_disutility,
    expected_utility,
    exponential_or_linear,
)
from .numerics import (
    BracketError,
    ConvergenceError,
    NormalizationError,
    NumericsError,
    QuadratureError,
    QuadratureSpec,
    RootBracket,
    central_difference,
    cumulants,
    find_root,
    integrate,
    merge_knots,
    second_difference,
)
from .scenarios import NamedCurve, Scenario, ScenarioError, load_scenario, parse_scenario
from .selection import (
    Allocation,
    DualSelection,
    EvalMatrix,
    SaddleSearch,
    StageDiagnostic,
    allocation_sums,
    dual_select,
    evaluate_matrix,
    find_pure_saddle,
    saddle_allocate,
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "ApproxReport",
    "AspirationChoice",
    "BracketError",
    "CURVE_KINDS",
    "ChainReport",
    "ConvergenceError",
    "CumulantSeries",
    "Curve",
    "CurveError",
    "CurveParameterError",
    "CurvatureError",
    "DesiderataReport",
    "DomainError",
    "DomainMismatchError",
    "DominanceVerdict",
    "DualSelection",
    "DualityResult",
    "EvalMatrix",
    "ExponentialNormalized",
    "ImplicationReport",
    "Linear",
    "LogWealth",
    "LotteryMargins",
    "NamedCurve",
    "NormalizationError",
    "NumericsError",
    "PiecewiseLinear",
    "QuadratureError",
    "QuadratureSpec",
    "RootBracket",
    "RuleOutcome",
    "SaddleSearch",
    "ScaledBeta",
    "Scenario",
    "ScenarioError",
    "SeriesDivergenceWarning",
    "SingularDensityError",
    "StageDiagnostic",
    "Step",
    "StepFunctionError",
    "TargetUpdate",
    "Triangular",
    "TruncatedGaussian",
    "UnattainableTargetError",
    "Uniform",
    "ae_cumulant_series",
    "ae_taylor2",
    "allocation_sums",
    "aspiration_equivalent",
    "ce_taylor2",
    "central_difference",
    "certain_equivalent",
    "choose_by_aspiration",
    "choose_by_eu",
    "cumulants",
    "desiderata_report",
    "dominance_implications",
    "dual_select",
    "effective_gamma",
    "evaluate_matrix",
    "evaluate_pair",
    "exceedance_probability",
    "expected_disutility",
    "expected_utility",
    "exponential_chain",
    "exponential_or_linear",
    "find_pure_saddle",
    "find_root",
    "first_moment_by_equal_areas",
    "first_order_dominates",
    "integrate",
    "load_scenario",
    "merge_knots",
    "parse_scenario",
    "risk_tolerance",
    "saddle_allocate",
    "second_difference",
    "second_order_dominates",
    "spread_tolerance",
    "update_target",
]
