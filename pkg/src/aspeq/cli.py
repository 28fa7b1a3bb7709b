"""Batch command-line front end.

Every command loads one JSON scenario file (see scenarios), runs one
computation, prints a readable report to stdout, and optionally writes
the same results as CSV (--csv) and JSON (--json). Output is
deterministic byte for byte: floats are always formatted with 9
significant digits and iteration order follows the scenario file.

Scenarios may carry a "published" list of reference values; after the
computation the matching block compares each one against the computed
quantity under its key and prints OK, DIFFERS (with a warning line), or
a plain report when no tolerance is given.

Exit codes: 0 success, 2 bad input (file, schema, flag values), 3
numeric failure inside the computation.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from typing import Any, Callable, TextIO

from .approximations import (
    SeriesDivergenceWarning,
    ae_cumulant_series,
    ae_taylor2,
    ce_taylor2,
    risk_tolerance,
    spread_tolerance,
)
from .curves import CurveError, ExponentialNormalized
from .delegation import choose_by_aspiration, desiderata_report, update_target
from .dominance import (
    dominance_implications,
    exponential_chain,
    first_order_dominates,
    second_order_dominates,
)
from .duality import aspiration_equivalent, certain_equivalent, effective_gamma, exponential_or_linear
from .numerics import NumericsError, QuadratureSpec
from .scenarios import Scenario, ScenarioError, load_scenario
from .selection import allocation_sums, evaluate_matrix, find_pure_saddle, saddle_allocate

COMMANDS = (
    "eval",
    "sweep",
    "update-target",
    "matrix",
    "allocate",
    "dominance",
    "approx",
    "solve-gamma",
    "delegate",
)


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _jnum(x: float) -> Any:
    # strict JSON has no Infinity/NaN; 9 significant digits elsewhere
    if math.isinf(x) or math.isnan(x):
        return _fmt(x)
    return float(_fmt(x))


class _Out:
    """Accumulates the three output forms side by side."""

    def __init__(self) -> None:
        self.lines: list[str] = []
        self.csv_rows: list[list[str]] = []
        self.doc: dict[str, Any] = {}
        self.computed: dict[str, float] = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def row(self, *cells: str) -> None:
        self.csv_rows.append(list(cells))


def _published_block(scenario: Scenario, out: _Out) -> None:
    entries = scenario.params.get("published")
    if not entries:
        return
    if not isinstance(entries, list):
        raise ScenarioError("published: expected a list")
    out.line()
    out.line("published comparison:")
    comparisons: list[dict[str, Any]] = []
    skipped = 0
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "key" not in entry or "value" not in entry:
            raise ScenarioError(f"published[{i}]: expected an object with key and value")
        key = entry["key"]
        value = float(entry["value"])
        tolerance = entry.get("tolerance")
        if key not in out.computed:
            skipped += 1
            continue
        got = out.computed[key]
        diff = abs(got - value)
        record: dict[str, Any] = {
            "key": key,
            "published": _jnum(value),
            "computed": _jnum(got),
            "difference": _jnum(diff),
        }
        if tolerance is None:
            out.line(
                f"  {key}: published {_fmt(value)} computed {_fmt(got)} "
                f"difference {_fmt(diff)} (reported)"
            )
            record["status"] = "reported"
        else:
            tol = float(tolerance)
            status = "OK" if diff <= tol else "DIFFERS"
            out.line(
                f"  {key}: published {_fmt(value)} computed {_fmt(got)} "
                f"difference {_fmt(diff)} tolerance {_fmt(tol)} {status}"
            )
            if status == "DIFFERS":
                out.line(
                    f"  warning: {key} is off the published value by "
                    f"{_fmt(diff)}, beyond tolerance {_fmt(tol)}"
                )
            record["tolerance"] = _jnum(tol)
            record["status"] = status
        comparisons.append(record)
    if skipped:
        noun = "entry" if skipped == 1 else "entries"
        out.line(f"  ({skipped} {noun} not produced by this command; skipped)")
    if comparisons:
        out.doc["published_comparison"] = comparisons


def _quad_spec(args: argparse.Namespace) -> QuadratureSpec | None:
    if args.tol is None:
        return None
    if not 0.0 < args.tol < 1.0:
        raise ScenarioError(f"--tol must be inside (0, 1), got {args.tol!r}")
    return QuadratureSpec(relative_tolerance=args.tol)


def _need(scenario: Scenario, key: str) -> Any:
    if key not in scenario.params:
        raise ScenarioError(f"{key}: required by this command, missing from scenario")
    return scenario.params[key]


def _param_number(scenario: Scenario, key: str) -> float:
    raw = _need(scenario, key)
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ScenarioError(f"{key}: expected a number, got {raw!r}")
    return float(raw)


def _cmd_eval(scenario: Scenario, args: argparse.Namespace) -> _Out:
    if not scenario.lotteries or not scenario.utilities:
        raise ScenarioError("eval needs at least one lottery and one utility")
    spec = _quad_spec(args)
    matrix = evaluate_matrix(
        [nc.curve for nc in scenario.lotteries],
        [nc.curve for nc in scenario.utilities],
        spec,
    )
    out = _Out()
    header = (
        "lottery",
        "utility",
        "expected_utility",
        "expected_disutility",
        "identity_sum",
        "certain_equivalent",
        "aspiration_equivalent",
    )
    out.row(*header)
    out.line("  ".join(header))
    pairs = []
    for i, fn in enumerate(scenario.lottery_names()):
        for j, un in enumerate(scenario.utility_names()):
            eu = matrix.eu[i][j]
            edu = matrix.edu[i][j]
            ce = matrix.ce[i][j]
            ae = matrix.ae[i][j]
            cells = (fn, un, _fmt(eu), _fmt(edu), _fmt(eu + edu), _fmt(ce), _fmt(ae))
            out.row(*cells)
            out.line("  ".join(cells))
            out.computed[f"eu:{fn}:{un}"] = eu
            out.computed[f"edu:{fn}:{un}"] = edu
            out.computed[f"ce:{fn}:{un}"] = ce
            out.computed[f"ae:{fn}:{un}"] = ae
            pairs.append(
                {
                    "lottery": fn,
                    "utility": un,
                    "expected_utility": _jnum(eu),
                    "expected_disutility": _jnum(edu),
                    "certain_equivalent": _jnum(ce),
                    "aspiration_equivalent": _jnum(ae),
                }
            )
    worst = max(
        abs(matrix.eu[i][j] + matrix.edu[i][j] - 1.0)
        for i in range(len(matrix.lotteries))
        for j in range(len(matrix.utilities))
    )
    out.line(f"largest |EU + EDU - 1|: {_fmt(worst)}")
    out.doc = {"pairs": pairs, "max_identity_error": _jnum(worst)}
    return out


def _gamma_grid(scenario: Scenario, args: argparse.Namespace) -> list[float]:
    if "gammas" in scenario.params:
        raw = scenario.params["gammas"]
        if not isinstance(raw, list) or not raw:
            raise ScenarioError("gammas: expected a nonempty list of numbers")
        return [float(g) for g in raw]
    if "gamma_range" in scenario.params:
        raw = scenario.params["gamma_range"]
        if not isinstance(raw, list) or len(raw) != 2:
            raise ScenarioError("gamma_range: expected [first, last]")
        n = args.grid if args.grid is not None else 21
        if n < 2:
            raise ScenarioError(f"--grid must be at least 2 for a range, got {n}")
        g0, g1 = float(raw[0]), float(raw[1])
        return [g0 + (g1 - g0) * k / (n - 1) for k in range(n)]
    raise ScenarioError("sweep needs either gammas or gamma_range in the scenario")


def _cmd_sweep(scenario: Scenario, args: argparse.Namespace) -> _Out:
    if len(scenario.lotteries) != 1:
        raise ScenarioError(
            f"sweep works on exactly one lottery, scenario has {len(scenario.lotteries)}"
        )
    spec = _quad_spec(args)
    f = scenario.lotteries[0].curve
    out = _Out()
    out.row("gamma", "certain_equivalent", "aspiration_equivalent")
    out.line("gamma  certain_equivalent  aspiration_equivalent")
    rows = []
    for g in _gamma_grid(scenario, args):
        u = exponential_or_linear(scenario.lo, scenario.hi, g)
        ce = certain_equivalent(f, u, spec)
        ae = aspiration_equivalent(f, u, spec)
        out.row(_fmt(g), _fmt(ce), _fmt(ae))
        out.line(f"{_fmt(g)}  {_fmt(ce)}  {_fmt(ae)}")
        rows.append(
            {
                "gamma": _jnum(g),
                "certain_equivalent": _jnum(ce),
                "aspiration_equivalent": _jnum(ae),
            }
        )
    out.doc = {"lottery": scenario.lotteries[0].name, "sweep": rows}
    return out


def _cmd_update_target(scenario: Scenario, args: argparse.Namespace) -> _Out:
    old_name = _need(scenario, "old_lottery")
    new_name = _need(scenario, "new_lottery")
    target = _param_number(scenario, "target")
    old = scenario.lottery(old_name)
    new = scenario.lottery(new_name)
    spec = _quad_spec(args)
    upd = update_target(old, target, new, spec)
    u = exponential_or_linear(scenario.lo, scenario.hi, upd.effective_gamma)
    round_trip = abs(aspiration_equivalent(old, u, spec) - target)
    limit = 1e-5 * (scenario.hi - scenario.lo)
    verdict = "PASS" if round_trip <= limit else "FAIL"

    out = _Out()
    rt = 1.0 / upd.effective_gamma if upd.effective_gamma != 0.0 else math.inf
    out.computed = {
        "effective_gamma": upd.effective_gamma,
        "risk_tolerance": rt,
        "new_target": upd.new_target,
        "old_exceed_prob": upd.old_exceed_prob,
        "new_exceed_prob": upd.new_exceed_prob,
        "cumulative_at_old_target": 1.0 - upd.old_exceed_prob,
    }
    out.line(f"old lottery {old_name}, target {_fmt(target)}")
    out.line(f"effective gamma: {_fmt(upd.effective_gamma)}")
    out.line(f"effective risk tolerance: {_fmt(rt)}")
    out.line(
        f"round trip |aspiration_equivalent(old, gamma) - target| = "
        f"{_fmt(round_trip)} (limit {_fmt(limit)}): {verdict}"
    )
    out.line(f"new lottery {new_name}, updated target: {_fmt(upd.new_target)}")
    out.line(f"exceedance probability: {_fmt(upd.old_exceed_prob)} -> {_fmt(upd.new_exceed_prob)}")
    out.row("field", "value")
    for key in (
        "effective_gamma",
        "risk_tolerance",
        "new_target",
        "old_exceed_prob",
        "new_exceed_prob",
    ):
        out.row(key, _fmt(out.computed[key]))
    out.doc = {
        "old_lottery": old_name,
        "new_lottery": new_name,
        "old_target": _jnum(target),
        "effective_gamma": _jnum(upd.effective_gamma),
        "risk_tolerance": _jnum(rt),
        "new_target": _jnum(upd.new_target),
        "old_exceed_prob": _jnum(upd.old_exceed_prob),
        "new_exceed_prob": _jnum(upd.new_exceed_prob),
        "round_trip_error": _jnum(round_trip),
        "round_trip": verdict,
    }
    return out


def _cmd_matrix(scenario: Scenario, args: argparse.Namespace) -> _Out:
    if not scenario.lotteries or not scenario.utilities:
        raise ScenarioError("matrix needs at least one lottery and one utility")
    spec = _quad_spec(args)
    fnames = scenario.lottery_names()
    unames = scenario.utility_names()
    matrix = evaluate_matrix(
        [nc.curve for nc in scenario.lotteries],
        [nc.curve for nc in scenario.utilities],
        spec,
    )
    out = _Out()
    blocks = (
        ("EU", matrix.eu, "eu"),
        ("EDU", matrix.edu, "edu"),
        ("CE", matrix.ce, "ce"),
        ("AE", matrix.ae, "ae"),
    )
    doc: dict[str, Any] = {"lotteries": fnames, "utilities": unames}
    for tag, cells, key in blocks:
        out.line(tag)
        out.line("  ".join(["lottery"] + unames))
        out.row(tag)
        out.row("lottery", *unames)
        doc[key] = []
        for i, fn in enumerate(fnames):
            values = [cells[i][j] for j in range(len(unames))]
            out.line("  ".join([fn] + [_fmt(v) for v in values]))
            out.row(fn, *[_fmt(v) for v in values])
            doc[key].append([_jnum(v) for v in values])
            for j, un in enumerate(unames):
                out.computed[f"{key}:{fn}:{un}"] = values[j]
        out.line()
    saddle = find_pure_saddle([list(r) for r in matrix.eu])
    out.computed["maximin"] = saddle.maximin
    out.computed["minimax"] = saddle.minimax
    doc["maximin"] = _jnum(saddle.maximin)
    doc["minimax"] = _jnum(saddle.minimax)
    if saddle.exists:
        out.computed["saddle_value"] = saddle.value
        out.line(
            f"pure saddle of the EU matrix: ({fnames[saddle.row]}, "
            f"{unames[saddle.col]}) value {_fmt(saddle.value)}"
        )
        doc["saddle"] = {
            "lottery": fnames[saddle.row],
            "utility": unames[saddle.col],
            "value": _jnum(saddle.value),
        }
    else:
        out.line(
            f"no pure saddle: maximin {_fmt(saddle.maximin)} < "
            f"minimax {_fmt(saddle.minimax)}"
        )
        doc["saddle"] = None
    out.doc = doc
    return out


def _cmd_allocate(scenario: Scenario, args: argparse.Namespace) -> _Out:
    if len(scenario.lotteries) != len(scenario.utilities) or not scenario.lotteries:
        raise ScenarioError("allocate needs equally many lotteries and utilities")
    spec = _quad_spec(args)
    fnames = scenario.lottery_names()
    unames = scenario.utility_names()
    lotteries = [nc.curve for nc in scenario.lotteries]
    utilities = [nc.curve for nc in scenario.utilities]
    allocation = saddle_allocate(lotteries, utilities, spec)
    matrix = evaluate_matrix(lotteries, utilities, spec)
    sum_ce, sum_ae, sum_eu = allocation_sums(allocation, matrix)

    out = _Out()
    out.row("stage", "lottery", "utility", "eu", "pure_saddle", "maximin", "minimax")
    stages = []
    for (i, j, eu), diag in zip(allocation.pairs, allocation.stage_diagnostics):
        kind = "pure saddle" if diag.pure_saddle else "no saddle, maximin fallback"
        out.line(
            f"stage {diag.stage}: {kind}; pair ({fnames[i]}, {unames[j]}) "
            f"eu {_fmt(eu)}; maximin {_fmt(diag.maximin)}, minimax {_fmt(diag.minimax)}"
        )
        out.row(
            str(diag.stage),
            fnames[i],
            unames[j],
            _fmt(eu),
            "yes" if diag.pure_saddle else "no",
            _fmt(diag.maximin),
            _fmt(diag.minimax),
        )
        out.computed[f"stage{diag.stage}_saddle_value"] = eu
        stages.append(
            {
                "stage": diag.stage,
                "lottery": fnames[i],
                "utility": unames[j],
                "eu": _jnum(eu),
                "pure_saddle": diag.pure_saddle,
                "maximin": _jnum(diag.maximin),
                "minimax": _jnum(diag.minimax),
            }
        )
    out.line(f"sum of certain equivalents: {_fmt(sum_ce)}")
    out.line(f"sum of aspiration equivalents: {_fmt(sum_ae)}")
    out.line(f"sum of expected utilities: {_fmt(sum_eu)}")
    out.computed["sum_ce"] = sum_ce
    out.computed["sum_ae"] = sum_ae
    out.computed["sum_eu"] = sum_eu
    out.doc = {
        "stages": stages,
        "sum_ce": _jnum(sum_ce),
        "sum_ae": _jnum(sum_ae),
        "sum_eu": _jnum(sum_eu),
    }
    return out


def _cmd_dominance(scenario: Scenario, args: argparse.Namespace) -> _Out:
    if len(scenario.utilities) < 2:
        raise ScenarioError("dominance compares the first two utilities; need two")
    first = scenario.params.get("first", scenario.utility_names()[0])
    second = scenario.params.get("second", scenario.utility_names()[1])
    A = scenario.utility(first)
    B = scenario.utility(second)
    grid = args.grid if args.grid is not None else 2048
    if grid < 64:
        raise ScenarioError(f"--grid must be at least 64, got {grid}")
    spec = _quad_spec(args)

    out = _Out()
    verdict = first_order_dominates(A, B, grid)
    out.computed["dominates"] = 1.0 if verdict.dominates else 0.0
    out.computed["max_violation"] = verdict.max_violation
    out.line(
        f"first-order: {first} dominates {second}: "
        f"{'yes' if verdict.dominates else 'no'} "
        f"(max violation {_fmt(verdict.max_violation)})"
    )
    if verdict.strict_witness is not None:
        out.line(f"  strict at x = {_fmt(verdict.strict_witness)}")
    second_order = second_order_dominates(A, B, grid)
    out.line(
        f"second-order (integrated, analog-derived): "
        f"{'yes' if second_order.dominates else 'no'} "
        f"(max violation {_fmt(second_order.max_violation)})"
    )
    doc: dict[str, Any] = {
        "first": first,
        "second": second,
        "first_order": {
            "dominates": verdict.dominates,
            "strict_witness": None
            if verdict.strict_witness is None
            else _jnum(verdict.strict_witness),
            "max_violation": _jnum(verdict.max_violation),
        },
        "second_order": {
            "dominates": second_order.dominates,
            "strict_witness": None
            if second_order.strict_witness is None
            else _jnum(second_order.strict_witness),
            "max_violation": _jnum(second_order.max_violation),
        },
    }
    out.row("quantity", "lottery", "value")
    out.row("first_order_dominates", "", "yes" if verdict.dominates else "no")
    out.row("max_violation", "", _fmt(verdict.max_violation))
    if verdict.dominates and scenario.lotteries:
        report = dominance_implications(
            A, B, [nc.curve for nc in scenario.lotteries], grid, spec
        )
        out.line(
            f"implication margins vs each lottery "
            f"(nonnegative expected, tolerance {_fmt(report.tolerance)}):"
        )
        rows = []
        for nc, m in zip(scenario.lotteries, report.per_lottery):
            out.line(
                f"  {nc.name}: edu {_fmt(m.edu_margin)}, ae {_fmt(m.ae_margin)}, "
                f"eu {_fmt(m.eu_margin)}"
            )
            for quantity, value in (
                ("edu_margin", m.edu_margin),
                ("ae_margin", m.ae_margin),
                ("eu_margin", m.eu_margin),
            ):
                out.row(quantity, nc.name, _fmt(value))
                out.computed[f"{quantity}:{nc.name}"] = value
            rows.append(
                {
                    "lottery": nc.name,
                    "edu_margin": _jnum(m.edu_margin),
                    "ae_margin": _jnum(m.ae_margin),
                    "eu_margin": _jnum(m.eu_margin),
                }
            )
        out.line(f"utility-density mean margin: {_fmt(report.mean_margin)}")
        out.line(f"all implications hold: {'yes' if report.all_hold else 'no'}")
        doc["implications"] = {
            "mean_margin": _jnum(report.mean_margin),
            "per_lottery": rows,
            "all_hold": report.all_hold,
        }
    if isinstance(A, ExponentialNormalized) and isinstance(B, ExponentialNormalized):
        g_lo, g_hi = sorted((A.gamma, B.gamma))
        chains = []
        for nc in scenario.lotteries:
            chain = exponential_chain(g_lo, g_hi, nc.curve, grid, spec)
            out.line(
                f"exponential chain on {nc.name} (gamma {_fmt(g_lo)} vs {_fmt(g_hi)}): "
                f"pointwise {_fmt(chain.pointwise_margin)}, eu {_fmt(chain.eu_margin)}, "
                f"ae {_fmt(chain.ae_margin)}, ce {_fmt(chain.ce_margin)}"
            )
            chains.append(
                {
                    "lottery": nc.name,
                    "pointwise_margin": _jnum(chain.pointwise_margin),
                    "eu_margin": _jnum(chain.eu_margin),
                    "ae_margin": _jnum(chain.ae_margin),
                    "ce_margin": _jnum(chain.ce_margin),
                }
            )
        if chains:
            doc["exponential_chain"] = chains
    out.doc = doc
    return out


def _cmd_approx(scenario: Scenario, args: argparse.Namespace) -> _Out:
    if not scenario.lotteries or not scenario.utilities:
        raise ScenarioError("approx needs at least one lottery and one utility")
    terms = args.terms if args.terms is not None else 6
    if not 1 <= terms <= 8:
        raise ScenarioError(f"--terms must be between 1 and 8, got {terms}")
    spec = _quad_spec(args)
    out = _Out()
    out.row("quantity", "lottery", "utility", "value")
    doc_pairs = []
    for fn_named in scenario.lotteries:
        for un_named in scenario.utilities:
            fn, un = fn_named.name, un_named.name
            F, U = fn_named.curve, un_named.curve
            ce = ce_taylor2(F, U, spec)
            ae = ae_taylor2(F, U, spec)
            st = spread_tolerance(F, ae.first_moment)
            rt = risk_tolerance(U, ce.first_moment)
            pair_doc: dict[str, Any] = {"lottery": fn, "utility": un}
            out.line(f"pair ({fn}, {un}):")
            for label, value in (
                ("lottery_mean", ce.first_moment),
                ("lottery_var", ce.central_second_moment),
                ("risk_tolerance", rt),
                ("ce_exact", ce.exact),
                ("ce_approx", ce.approx),
                ("ce_premium", ce.premium),
                ("utility_mean", ae.first_moment),
                ("utility_var", ae.central_second_moment),
                ("spread_tolerance", st),
                ("ae_exact", ae.exact),
                ("ae_approx", ae.approx),
                ("ae_premium", ae.premium),
            ):
                out.line(f"  {label}: {_fmt(value)}")
                out.row(label, fn, un, _fmt(value))
                out.computed[f"{label}:{fn}:{un}"] = value
                pair_doc[label] = _jnum(value)
            if isinstance(F, ExponentialNormalized) and F.gamma > 0 and not U.is_step:
                with warnings.catch_warnings():
                    # the divergence verdict is printed below; the Python
                    # warning would say it twice
                    warnings.simplefilter("ignore", SeriesDivergenceWarning)
                    series = ae_cumulant_series(F, U, terms, spec)
                out.line(
                    f"  cumulant series ({terms} terms): {_fmt(series.series)}, "
                    f"closed form {_fmt(series.closed_form)}"
                )
                if series.diverging:
                    out.line("  warning: series terms grow past k=3, not converging")
                out.row("ae_series", fn, un, _fmt(series.series))
                out.row("ae_closed_form", fn, un, _fmt(series.closed_form))
                out.computed[f"ae_series:{fn}:{un}"] = series.series
                out.computed[f"ae_closed_form:{fn}:{un}"] = series.closed_form
                pair_doc["ae_series"] = _jnum(series.series)
                pair_doc["ae_closed_form"] = _jnum(series.closed_form)
                pair_doc["series_terms"] = [_jnum(t) for t in series.terms]
                pair_doc["series_diverging"] = series.diverging
            doc_pairs.append(pair_doc)
    out.doc = {"pairs": doc_pairs}
    return out


def _cmd_solve_gamma(scenario: Scenario, args: argparse.Namespace) -> _Out:
    target = _param_number(scenario, "target")
    if len(scenario.lotteries) == 1:
        name = scenario.lotteries[0].name
    else:
        name = _need(scenario, "lottery")
    f = scenario.lottery(name)
    spec = _quad_spec(args)
    tol = args.tol if args.tol is not None else 1e-10
    g = effective_gamma(f, target, spec, value_tolerance=tol)
    u = exponential_or_linear(scenario.lo, scenario.hi, g)
    achieved = aspiration_equivalent(f, u, spec)
    rt = 1.0 / g if g != 0.0 else math.inf
    out = _Out()
    out.line(f"lottery {name}, target {_fmt(target)}")
    out.line(f"effective gamma: {_fmt(g)}")
    out.line(f"risk tolerance: {_fmt(rt)}")
    out.line(f"aspiration equivalent at that gamma: {_fmt(achieved)}")
    out.row("field", "value")
    out.row("effective_gamma", _fmt(g))
    out.row("risk_tolerance", _fmt(rt))
    out.row("achieved_target", _fmt(achieved))
    out.computed = {
        "effective_gamma": g,
        "risk_tolerance": rt,
        "achieved_target": achieved,
    }
    out.doc = {
        "lottery": name,
        "target": _jnum(target),
        "effective_gamma": _jnum(g),
        "risk_tolerance": _jnum(rt),
        "achieved_target": _jnum(achieved),
    }
    return out


def _cmd_delegate(scenario: Scenario, args: argparse.Namespace) -> _Out:
    if len(scenario.lotteries) < 2 or not scenario.utilities:
        raise ScenarioError("delegate needs at least two lotteries and one utility")
    fractile = args.fractile if args.fractile is not None else 0.5
    if not 0.0 < fractile < 1.0:
        raise ScenarioError(f"--fractile must be inside (0, 1), got {fractile!r}")
    spec = _quad_spec(args)
    lotteries = [nc.curve for nc in scenario.lotteries]
    fnames = scenario.lottery_names()
    utility = scenario.utilities[0].curve
    report = desiderata_report(lotteries, utility, fractile, spec)
    aspiration = choose_by_aspiration(lotteries, utility, spec)

    out = _Out()
    out.line(f"principal's choice by expected utility: {fnames[report.principal_choice]}")
    out.line(
        f"delegate's choice by aspiration targets: {fnames[aspiration.index]}"
    )
    out.row("rule", "lottery", "target", "exceedance")
    doc_rules = []
    for rule in report.rules:
        tag = rule.rule if rule.rule != "fractile" else f"fractile({_fmt(fractile)})"
        out.line(f"rule {tag}:")
        for fn, t, p in zip(fnames, rule.targets, rule.exceedance):
            out.line(f"  {fn}: target {_fmt(t)}, exceedance {_fmt(p)}")
            out.row(rule.rule, fn, _fmt(t), _fmt(p))
        agrees = "agrees with principal" if rule.agrees_with_principal else "DISAGREES"
        separates = "" if rule.separates_lotteries else " (cannot separate lotteries)"
        out.line(f"  agent picks {fnames[rule.agent_choice]}: {agrees}{separates}")
        out.computed[f"agent_choice:{rule.rule}"] = float(rule.agent_choice)
        doc_rules.append(
            {
                "rule": rule.rule,
                "targets": [_jnum(t) for t in rule.targets],
                "exceedance": [_jnum(p) for p in rule.exceedance],
                "agent_choice": fnames[rule.agent_choice],
                "agrees_with_principal": rule.agrees_with_principal,
                "separates_lotteries": rule.separates_lotteries,
            }
        )
    out.computed["principal_choice"] = float(report.principal_choice)
    out.doc = {
        "principal_choice": fnames[report.principal_choice],
        "aspiration_choice": fnames[aspiration.index],
        "rules": doc_rules,
    }
    return out


_HANDLERS: dict[str, Callable[[Scenario, argparse.Namespace], _Out]] = {
    "eval": _cmd_eval,
    "sweep": _cmd_sweep,
    "update-target": _cmd_update_target,
    "matrix": _cmd_matrix,
    "allocate": _cmd_allocate,
    "dominance": _cmd_dominance,
    "approx": _cmd_approx,
    "solve-gamma": _cmd_solve_gamma,
    "delegate": _cmd_delegate,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aspeq",
        description="Duality computations on lottery/utility scenario files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--csv", help="write results as CSV to this path")
        p.add_argument("--json", help="write results as JSON to this path")
        p.add_argument("--tol", type=float, help="quadrature relative tolerance")
        p.add_argument("--grid", type=int, help="grid point count")
        p.add_argument("--terms", type=int, help="cumulant series terms")
        p.add_argument("--fractile", type=float, help="fractile level for delegate")
    return parser


def _write_csv(path: str, rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(rows)


def _write_json(path: str, doc: dict[str, Any]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def main(argv: list[str] | None = None, stdout: TextIO | None = None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
        out = _HANDLERS[args.command](scenario, args)
        _published_block(scenario, out)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericsError, CurveError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for line in out.lines:
        print(line, file=stdout)
    try:
        if args.csv:
            _write_csv(args.csv, out.csv_rows)
        if args.json:
            _write_json(args.json, out.doc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
