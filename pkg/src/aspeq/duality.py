"""The four central quantities for a (lottery, utility) pair of curves and
the effective-curvature inverse problem.

Conventions. Both curves live on one shared interval [lo, hi]. Write F for
the lottery read as a CDF with density f, and U for the normalized utility
with density u. Then

    expected_utility     EU  = integral of f(x) U(x) dx
    expected_disutility  EDU = integral of u(x) F(x) dx
    certain_equivalent   CE  = U^-1(EU)
    aspiration_equivalent AE = F^-1(EDU)

Integration by parts gives EU + EDU = 1; this module never uses that
identity as a shortcut (EDU always gets its own integral), so the sum is a
genuine numerical cross-check. A second consequence worth naming: the
probability of exceeding the aspiration equivalent, 1 - F(AE), equals EU.
Maximizing exceedance over lotteries is therefore the same decision as
maximizing expected utility; delegation builds on exactly that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curves import (
    Curve,
    ExponentialNormalized,
    Linear,
    SingularDensityError,
    StepFunctionError,
)
from .numerics import QuadratureSpec, RootBracket, find_root, integrate, merge_knots

GAMMA_SPAN_CAP = 500.0


def exponential_or_linear(lo: float, hi: float, gamma: float) -> Curve:
    """Constant-curvature curve for any gamma, with the gamma = 0 member
    handed to the linear kind where the exponential formula degenerates."""
    if gamma == 0.0:
        return Linear(lo, hi)
    return ExponentialNormalized(lo, hi, gamma=gamma)


class DomainMismatchError(ValueError):
    """Lottery and utility declared on different intervals."""


class UnattainableTargetError(ValueError):
    """No finite exponential curvature reaches the requested target."""


@dataclass(frozen=True)
class DualityResult:
    expected_utility: float
    expected_disutility: float
    certain_equivalent: float
    aspiration_equivalent: float


def _require_shared_domain(lottery: Curve, utility: Curve) -> None:
    if (lottery.lo, lottery.hi) != (utility.lo, utility.hi):
        raise DomainMismatchError(
            f"lottery domain [{lottery.lo!r}, {lottery.hi!r}] != "
            f"utility domain [{utility.lo!r}, {utility.hi!r}]; curves must be "
            "declared on one shared interval, there is no automatic rescaling"
        )


def _clip_unit(p: float, slack: float = 1e-9) -> float:
    """Snap quadrature roundoff at the ends of [0,1]; anything further out
    is a real error, not noise."""
    if -slack <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + slack:
        return 1.0
    if 0.0 <= p <= 1.0:
        return p
    raise ArithmeticError(f"expected a probability, got {p!r}")


def expected_utility(
    lottery: Curve, utility: Curve, spec: QuadratureSpec | None = None
) -> float:
    """Integral of lottery density times utility value.

    Step shortcuts: a step lottery at t is the sure amount t, so EU = U(t);
    a step utility at t pays off only above t, so EU = 1 - F(t).
    """
    _require_shared_domain(lottery, utility)
    if lottery.is_step and utility.is_step:
        raise StepFunctionError("both curves are steps; the pairing is degenerate")
    if lottery.is_step:
        return utility.value(lottery.threshold)
    if utility.is_step:
        return 1.0 - lottery.value(utility.threshold)
    if lottery.has_singular_density:
        raise SingularDensityError(
            f"{lottery.kind} lottery density is unbounded at an endpoint; "
            "expected_utility integrates it directly. Use expected_disutility "
            "(which integrates the bounded CDF) for such lotteries."
        )
    knots = merge_knots(
        lottery.kinks(), utility.kinks(), lottery.sample_hints(), utility.sample_hints()
    )
    return integrate(
        lambda x: lottery.density(x) * utility.value(x),
        lottery.lo,
        lottery.hi,
        spec,
        knots,
    )


def expected_disutility(
    lottery: Curve, utility: Curve, spec: QuadratureSpec | None = None
) -> float:
    """Integral of utility density times lottery value (the mirror of
    expected_utility with the two roles swapped)."""
    _require_shared_domain(lottery, utility)
    if lottery.is_step and utility.is_step:
        raise StepFunctionError("both curves are steps; the pairing is degenerate")
    if utility.is_step:
        return lottery.value(utility.threshold)
    if lottery.is_step:
        return 1.0 - utility.value(lottery.threshold)
    if utility.has_singular_density:
        raise SingularDensityError(
            f"{utility.kind} utility density is unbounded at an endpoint; "
            "expected_disutility integrates it directly. Use expected_utility "
            "for such utilities."
        )
    knots = merge_knots(
        lottery.kinks(), utility.kinks(), lottery.sample_hints(), utility.sample_hints()
    )
    return integrate(
        lambda x: utility.density(x) * lottery.value(x),
        lottery.lo,
        lottery.hi,
        spec,
        knots,
    )


def certain_equivalent(
    lottery: Curve, utility: Curve, spec: QuadratureSpec | None = None
) -> float:
    """Sure amount with the same utility as the lottery: U^-1(EU)."""
    if utility.is_step:
        raise StepFunctionError(
            "certain equivalent under a step utility is degenerate: the "
            "inverse is a single point whenever EU is strictly inside (0,1)"
        )
    eu = _clip_unit(expected_utility(lottery, utility, spec))
    return utility.quantile(eu)


def aspiration_equivalent(
    lottery: Curve, utility: Curve, spec: QuadratureSpec | None = None
) -> float:
    """Outcome level whose step utility matches the pair's expected
    utility: F^-1(EDU). Exceeding it has probability exactly EU."""
    if lottery.is_step:
        raise StepFunctionError(
            "aspiration equivalent of a step lottery is degenerate; the "
            "lottery is the sure amount at its threshold"
        )
    edu = _clip_unit(expected_disutility(lottery, utility, spec))
    return lottery.quantile(edu)


def exceedance_probability(lottery: Curve, x: float) -> float:
    """Probability the lottery pays strictly more than x: 1 - F(x)."""
    return 1.0 - lottery.value(x)


def evaluate_pair(
    lottery: Curve, utility: Curve, spec: QuadratureSpec | None = None
) -> DualityResult:
    """All four quantities. EDU is integrated independently of EU, so the
    sum-to-one identity stays an observable check on the result."""
    if lottery.is_step or utility.is_step:
        raise StepFunctionError(
            "evaluate_pair needs both equivalents; use the individual "
            "functions for step curves"
        )
    eu = expected_utility(lottery, utility, spec)
    edu = expected_disutility(lottery, utility, spec)
    return DualityResult(
        expected_utility=eu,
        expected_disutility=edu,
        certain_equivalent=utility.quantile(_clip_unit(eu)),
        aspiration_equivalent=lottery.quantile(_clip_unit(edu)),
    )


def effective_gamma(
    lottery: Curve,
    target: float,
    spec: QuadratureSpec | None = None,
    value_tolerance: float = 1e-10,
) -> float:
    """Curvature whose exponential utility puts the aspiration equivalent
    of `lottery` at `target`.

    Solves EDU(lottery, exp_gamma) = F(target) by bracketed root finding.
    EDU decreases strictly in gamma (higher curvature concentrates the
    utility density toward the low end, where F is small), so the bracket
    [-1, 1]/span is expanded geometrically toward the side that still
    disagrees in sign, up to |gamma|*span = 500. gamma = 0 inside the
    bracket is evaluated through the linear curve, where the exponential
    formula degenerates.
    """
    lo, hi = lottery.lo, lottery.hi
    span = hi - lo
    if not lo < target < hi:
        raise UnattainableTargetError(
            f"target {target!r} is at or outside the bounds [{lo!r}, {hi!r}]; "
            "the extreme-curvature limits reach the bounds only asymptotically"
        )
    p = lottery.value(target)
    if p <= 0.0 or p >= 1.0:
        raise UnattainableTargetError(
            f"lottery puts cumulative probability {p!r} at {target!r}; the "
            "target sits in a zero-mass tail"
        )

    def gap(g: float) -> float:
        u = exponential_or_linear(lo, hi, g)
        return expected_disutility(lottery, u, spec) - p

    g_lo, g_hi = -1.0 / span, 1.0 / span
    f_lo, f_hi = gap(g_lo), gap(g_hi)
    # gap is decreasing: f_lo < 0 means the root lies further left, f_hi > 0
    # further right
    while f_lo < 0.0 and abs(g_lo) * span < GAMMA_SPAN_CAP:
        g_lo = max(g_lo * 4.0, -GAMMA_SPAN_CAP / span)
        f_lo = gap(g_lo)
    while f_hi > 0.0 and g_hi * span < GAMMA_SPAN_CAP:
        g_hi = min(g_hi * 4.0, GAMMA_SPAN_CAP / span)
        f_hi = gap(g_hi)
    if f_lo < 0.0 or f_hi > 0.0:
        raise UnattainableTargetError(
            f"no curvature with |gamma|*span <= {GAMMA_SPAN_CAP:g} reaches "
            f"cumulative probability {p!r} at the target"
        )
    return find_root(gap, RootBracket(g_lo, g_hi, value_tolerance))
