"""Shared numerical kernels: quadrature, bracketed root finding, difference
stencils, and cumulants of a density on a bounded interval.

Everything here works on plain callables over a closed interval [lo, hi].
The quadrature is adaptive composite Simpson with the Richardson end
correction, which makes each accepted panel exact for polynomials through
degree five. Callers that know where an integrand loses smoothness pass
those abscissae as knots; panels never straddle a knot.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence


class NumericsError(Exception):
    """Base class for failures raised by this module."""


class QuadratureError(NumericsError):
    """Adaptive refinement hit its depth limit or saw a non-finite value."""


class BracketError(NumericsError):
    """The supplied interval does not bracket a sign change."""


class ConvergenceError(NumericsError):
    """Iteration stalled before reaching the requested tolerance."""


class NormalizationError(NumericsError):
    """A density failed its unit-mass check."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy request for integrate(). Tolerances combine as
    max(absolute_tolerance, relative_tolerance * |rough estimate|)."""

    relative_tolerance: float = 1e-9
    absolute_tolerance: float = 1e-12
    max_subdivision_depth: int = 40

    def __post_init__(self) -> None:
        if self.relative_tolerance <= 0 or self.absolute_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivision_depth < 1:
            raise ValueError("max_subdivision_depth must be at least 1")


@dataclass(frozen=True)
class RootBracket:
    """Interval known (by the caller) to straddle a root, plus the stopping
    tolerance applied to |g(x)|, not to the interval width."""

    lo: float
    hi: float
    value_tolerance: float = 1e-10

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("bracket endpoints must be finite")
        if self.lo >= self.hi:
            raise ValueError("bracket must satisfy lo < hi")
        if self.value_tolerance <= 0:
            raise ValueError("value_tolerance must be positive")


DEFAULT_QUADRATURE = QuadratureSpec()


def _eval(f: Callable[[float], float], x: float) -> float:
    y = f(x)
    if not math.isfinite(y):
        raise QuadratureError(f"integrand returned a non-finite value at x={x!r}")
    return y


def _panel(f, a, b, fa, fm, fb, simpson, depth):
    """Refine one Simpson estimate by a level and package it for the heap.

    Returns (value, error, record); record carries the five samples so a
    later split reuses them instead of re-evaluating f.
    """
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = _eval(f, lm)
    frm = _eval(f, rm)
    h6 = (b - a) / 12.0
    left = h6 * (fa + 4.0 * flm + fm)
    right = h6 * (fm + 4.0 * frm + fb)
    delta = left + right - simpson
    # Richardson: the correction removes the leading error term, leaving
    # a residual of about delta/15 to count against the global budget.
    value = left + right + delta / 15.0
    error = abs(delta) / 15.0
    record = (a, b, fa, flm, fm, frm, fb, left, right, value, error, depth)
    return value, error, record


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    spec: QuadratureSpec | None = None,
    knots: Iterable[float] = (),
) -> float:
    """Integrate f over [lo, hi].

    knots lists interior points where f or a derivative may jump; the
    interval is split there so every Simpson panel sees a smooth piece.
    Knots outside the open interval are ignored.

    Refinement is globally adaptive: panels share one error budget and the
    worst panel splits first, so an isolated rough spot (a steep density
    endpoint, say) cannot starve while smooth panels hoard tolerance.
    """
    spec = spec or DEFAULT_QUADRATURE
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("integration limits must be finite")
    if hi < lo:
        raise ValueError("integration limits must satisfy lo <= hi")
    if hi == lo:
        return 0.0

    cuts = [lo]
    for k in sorted(set(float(k) for k in knots)):
        if lo < k < hi:
            cuts.append(k)
    cuts.append(hi)

    heap: list[tuple[float, int, tuple]] = []
    seq = 0
    total = 0.0
    total_error = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        m = 0.5 * (a + b)
        # interior cuts are declared discontinuities; sample their
        # one-sided limits (one ulp inside) so a jump in f at the cut
        # cannot contaminate the panels on either side
        xa = a if a == lo else math.nextafter(a, b)
        xb = b if b == hi else math.nextafter(b, a)
        fa, fm, fb = _eval(f, xa), _eval(f, m), _eval(f, xb)
        simpson = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
        value, error, record = _panel(f, a, b, fa, fm, fb, simpson, spec.max_subdivision_depth)
        heapq.heappush(heap, (-error, seq, record))
        seq += 1
        total += value
        total_error += error

    while True:
        budget = max(spec.absolute_tolerance, spec.relative_tolerance * abs(total))
        if total_error <= budget:
            break
        neg_error, _, record = heapq.heappop(heap)
        a, b, fa, flm, fm, frm, fb, left, right, value, error, depth = record
        if depth <= 0:
            raise QuadratureError(
                f"refinement depth exhausted on [{a!r}, {b!r}]: best estimate "
                f"{value!r}, error bound {error:.3e}"
            )
        m = 0.5 * (a + b)
        total -= value
        total_error -= error
        for child in (
            _panel(f, a, m, fa, flm, fm, left, depth - 1),
            _panel(f, m, b, fm, frm, fb, right, depth - 1),
        ):
            child_value, child_error, child_record = child
            heapq.heappush(heap, (-child_error, seq, child_record))
            seq += 1
            total += child_value
            total_error += child_error

    # The running total accumulates rounding from the pop/push churn; fsum
    # over the surviving panels is exact, so the result cannot depend on
    # refinement history.
    return math.fsum(rec[9] for _, _, rec in heap)


def find_root(g: Callable[[float], float], bracket: RootBracket) -> float:
    """Locate a root of g inside the bracket.

    Illinois-damped false position with a bisection guard; stops when
    |g(x)| <= bracket.value_tolerance. The endpoints must produce values
    of opposite sign (either endpoint already inside tolerance is
    returned as-is).
    """
    lo, hi, tol = bracket.lo, bracket.hi, bracket.value_tolerance
    glo = g(lo)
    if abs(glo) <= tol:
        return lo
    ghi = g(hi)
    if abs(ghi) <= tol:
        return hi
    if math.copysign(1.0, glo) == math.copysign(1.0, ghi):
        raise BracketError(
            f"no sign change on [{lo!r}, {hi!r}]: g(lo)={glo!r}, g(hi)={ghi!r}"
        )

    side = 0
    for _ in range(200):
        denom = ghi - glo
        if denom == 0.0:
            x = 0.5 * (lo + hi)
        else:
            x = hi - ghi * (hi - lo) / denom
            # fall back to bisection when interpolation leaves the interval
            if not (lo < x < hi):
                x = 0.5 * (lo + hi)
        gx = g(x)
        if abs(gx) <= tol:
            return x
        if math.copysign(1.0, gx) == math.copysign(1.0, glo):
            lo, glo = x, gx
            if side == -1:
                ghi *= 0.5  # Illinois damping against endpoint stagnation
            side = -1
        else:
            hi, ghi = x, gx
            if side == +1:
                glo *= 0.5
            side = +1
        if hi - lo <= 1e-15 * max(1.0, abs(lo), abs(hi)):
            best = lo if abs(glo) <= abs(ghi) else hi
            gbest = min(abs(glo), abs(ghi))
            if gbest <= tol:
                return best
            raise ConvergenceError(
                f"bracket collapsed at x={best!r} with |g|={gbest:.3e} > {tol:.1e}"
            )
    raise ConvergenceError("root iteration did not converge in 200 steps")


def central_difference(
    f: Callable[[float], float],
    x: float,
    h: float | None = None,
    bounds: tuple[float, float] | None = None,
) -> float:
    """Second-order first derivative of f at x.

    With bounds given, h defaults to 1e-5 times the interval width and the
    stencil switches to a one-sided second-order form when x sits within h
    of an end, so f is never sampled outside [lo, hi].
    """
    if bounds is not None:
        lo, hi = bounds
        if not lo <= x <= hi:
            raise ValueError(f"x={x!r} outside bounds [{lo!r}, {hi!r}]")
        if h is None:
            h = 1e-5 * (hi - lo)
        if x - h < lo:
            return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)
        if x + h > hi:
            return (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (2.0 * h)
    elif h is None:
        h = 1e-5 * max(1.0, abs(x))
    return (f(x + h) - f(x - h)) / (2.0 * h)


def second_difference(
    f: Callable[[float], float],
    x: float,
    h: float | None = None,
    bounds: tuple[float, float] | None = None,
) -> float:
    """Second-order second derivative, one-sided at the ends like
    central_difference."""
    if bounds is not None:
        lo, hi = bounds
        if not lo <= x <= hi:
            raise ValueError(f"x={x!r} outside bounds [{lo!r}, {hi!r}]")
        if h is None:
            h = 1e-5 * (hi - lo)
        if x - h < lo:
            return (2.0 * f(x) - 5.0 * f(x + h) + 4.0 * f(x + 2.0 * h) - f(x + 3.0 * h)) / h**2
        if x + h > hi:
            return (2.0 * f(x) - 5.0 * f(x - h) + 4.0 * f(x - 2.0 * h) - f(x - 3.0 * h)) / h**2
    elif h is None:
        h = 1e-5 * max(1.0, abs(x))
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / h**2


def cumulants(
    density: Callable[[float], float],
    lo: float,
    hi: float,
    order: int,
    spec: QuadratureSpec | None = None,
    knots: Iterable[float] = (),
) -> tuple[float, ...]:
    """First `order` cumulants of the distribution with the given density.

    Raw moments come from quadrature; cumulants follow from the standard
    recursion. The density must integrate to 1 within 1e-6 or the call
    refuses (NormalizationError), since a mass error contaminates every
    cumulant. order is capped at 8: beyond that the moment integrals lose
    too many digits to cancellation for the recursion to be trustworthy.
    """
    if not 1 <= order <= 8:
        raise ValueError("order must be between 1 and 8")
    mass = integrate(density, lo, hi, spec, knots)
    if abs(mass - 1.0) > 1e-6:
        raise NormalizationError(f"density mass {mass!r} differs from 1 by more than 1e-6")

    moments = [1.0]
    for n in range(1, order + 1):
        moments.append(integrate(lambda x, n=n: x**n * density(x), lo, hi, spec, knots))

    kappa: list[float] = []
    for n in range(1, order + 1):
        acc = moments[n]
        for j in range(1, n):
            acc -= math.comb(n - 1, j - 1) * kappa[j - 1] * moments[n - j]
        kappa.append(acc)
    return tuple(kappa)


def merge_knots(*groups: Sequence[float]) -> tuple[float, ...]:
    """Union of knot lists, sorted, duplicates removed."""
    seen = sorted(set(float(k) for group in groups for k in group))
    return tuple(seen)
