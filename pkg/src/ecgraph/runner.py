"""Command execution and report rendering behind the CLI."""

from __future__ import annotations

import json
import logging
import math
import sys
from pathlib import Path
from typing import IO, Any, Callable, Dict, List, Union

from .config import get_settings
from .core.cayley import build_graph, export_edge_list
from .core.ec_check import (
    brute_force_ec,
    eq_main_value,
    find_least_q1,
    sufficient_condition,
)
from .core.number_theory import next_pythagorean_prime
from .core.pseudorandom import (
    best_pr_trend,
    cheeger_bruteforce,
    cheeger_spectral_lower,
    mixing_scan,
    quasirandom_stats,
    quasirandom_trend,
)
from .core.spectrum import character_sum_spectrum, closed_form_spectrum, moment_identities
from .errors import BudgetExceededError, EcGraphError, ReportWriteError, SizeCapError
from .state.schema import CheckRecord, EcCertificate, GraphParams, RunConfig, RunReport
from .utils.storage import atomic_write_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INVALID = 2
EXIT_REFUSED = 3
EXIT_ERROR = 4

ORACLE_TOL = 1e-8

DEFAULT_TREND_QS = {1: [5, 13, 17, 29], 3: [5, 13, 17]}


def _params(config: RunConfig) -> GraphParams:
    if config.q is None:
        raise ValueError(f"--q is required for {config.command}")
    return GraphParams(q=config.q, e=config.e)


def _require_t(config: RunConfig) -> int:
    if config.t is None:
        raise ValueError(f"--t is required for {config.command}")
    if config.t < 1:
        raise ValueError(f"t must be >= 1, got t={config.t}")
    return config.t


def _params_block(params: GraphParams) -> Dict[str, int]:
    return {"q": params.q, "e": params.e, "n": params.n, "degree": params.degree}


def _certificate_block(cert: EcCertificate) -> Dict[str, Any]:
    return {
        "t": cert.t,
        "verified": cert.verified,
        "method": cert.method,
        "residue_distinct": cert.residue_distinct,
        "counterexample": (
            {"A": cert.counterexample.A, "B": cert.counterexample.B} if cert.counterexample else None
        ),
        "witness_count_min": cert.witness_count_min,
        "subsets_scanned": cert.subsets_scanned,
    }


def _spectrum_block(params: GraphParams) -> tuple[Dict[str, Any], List[CheckRecord]]:
    spec = closed_form_spectrum(params)
    trace_ok, second_ok = moment_identities(spec)
    result = {
        "eigenvalues": [
            {"a_coeff": ev.a_coeff, "b_coeff": ev.b_coeff, "mult": ev.multiplicity, "value": ev.value}
            for ev in spec.eigenvalues
        ],
        "lambda": spec.lambda_,
        "cheeger_lower": cheeger_spectral_lower(spec),
    }
    checks = [
        CheckRecord(name="trace", ok=trace_ok, detail="sum mult*value = 0 (exact)"),
        CheckRecord(name="second_moment", ok=second_ok, detail=f"sum mult*value^2 = n*d = {params.n * params.degree}"),
    ]
    if params.n <= get_settings().numerical_cap:
        expected = sorted(spec.values())
        observed = sorted(float(v) for v in character_sum_spectrum(params))
        worst = max(abs(a - b) for a, b in zip(expected, observed))
        checks.append(
            CheckRecord(
                name="character_sum_oracle",
                ok=worst <= ORACLE_TOL,
                detail=f"max deviation {worst:.3e}",
            )
        )
    return result, checks


def _cmd_construct(config: RunConfig) -> RunReport:
    params = _params(config)
    g = build_graph(params)
    popcounts = {r.bit_count() for r in g.rows}
    diagonal_zero = all(not (r >> x) & 1 for x, r in enumerate(g.rows))
    symmetric = {(-s) % g.n for s in g.connection_set} == set(g.connection_set)
    m = g.edge_count
    result: Dict[str, Any] = {"n": g.n, "degree": g.degree, "edge_count": m}
    if config.edges_path:
        export_edge_list(g, config.edges_path)
        result["edges_path"] = config.edges_path
    checks = [
        CheckRecord(name="regular", ok=popcounts == {params.degree}, detail=f"row popcounts {sorted(popcounts)}"),
        CheckRecord(name="zero_diagonal", ok=diagonal_zero),
        CheckRecord(name="symmetric", ok=symmetric, detail="T = -T"),
        CheckRecord(name="edge_count", ok=2 * m == g.n * params.degree, detail=f"m = {m}"),
    ]
    return RunReport(params=_params_block(params), command=config.command, seed=config.seed, result=result, checks=checks)


def _cmd_spectrum(config: RunConfig) -> RunReport:
    params = _params(config)
    result, checks = _spectrum_block(params)
    return RunReport(params=_params_block(params), command=config.command, seed=config.seed, result=result, checks=checks)


def _cmd_check_ec(config: RunConfig) -> RunReport:
    params = _params(config)
    t = _require_t(config)
    g = build_graph(params)
    cert = brute_force_ec(
        g,
        t,
        budget=config.budget,
        force=config.force,
        workers=config.threads,
        residue_distinct=config.residue_distinct,
    )
    suff = sufficient_condition(params, t)
    result = _certificate_block(cert)
    result["sufficient_condition"] = suff
    checks = [CheckRecord(name="exhaustive", ok=cert.verified, detail=f"{cert.subsets_scanned} subsets scanned")]
    # the inequality only speaks for residue-distinct splits once e > 1
    if suff and (params.e == 1 or config.residue_distinct):
        checks.append(CheckRecord(name="soundness", ok=cert.verified, detail="sufficient condition implies exhaustive"))
    report = RunReport(params=_params_block(params), command=config.command, seed=config.seed, result=result, checks=checks)
    report.exit_code = EXIT_OK if cert.verified else EXIT_REFUTED
    return report


def _cmd_mixing(config: RunConfig) -> RunReport:
    params = _params(config)
    g = build_graph(params)
    spec = closed_form_spectrum(params)
    scan = mixing_scan(g, spec, config.samples, config.seed, workers=config.threads)
    worst = scan.worst
    result = {
        "samples": scan.samples,
        "max_normalized": scan.max_normalized,
        "lambda": scan.lambda_,
        "ok": scan.ok,
        "violations": scan.violations,
        "worst": (
            {"U_size": len(worst.U), "W_size": len(worst.W), "e_uw": worst.e_uw, "normalized": worst.normalized}
            if worst
            else None
        ),
    }
    checks = [CheckRecord(name="expander_mixing", ok=scan.ok, detail=f"{scan.violations} violations")]
    report = RunReport(params=_params_block(params), command=config.command, seed=config.seed, result=result, checks=checks)
    report.exit_code = EXIT_OK if scan.ok else EXIT_REFUTED
    return report


def _cmd_trend(config: RunConfig) -> RunReport:
    qs = config.qs or DEFAULT_TREND_QS.get(config.e, [5, 13, 17])
    instances = [GraphParams(q=q, e=config.e) for q in qs]
    trend = best_pr_trend(instances)
    qr = quasirandom_trend(instances)
    result = {
        "e": trend.e,
        "epsilon": trend.epsilon,
        "instances": [
            {
                "q": row.params.q,
                "degree": row.degree,
                "lambda": row.lambda_,
                "ratio": row.ratio,
                "edge_probability": row.edge_probability,
                "lambda2_over_n": ratio,
            }
            for row, (_, ratio) in zip(trend.instances, qr.instances)
        ],
        "increasing": trend.increasing,
        "bounded": trend.bounded,
        "lambda2_over_n_decreasing": qr.decreasing,
    }
    if trend.e == 1:
        shape = CheckRecord(name="bounded_ratio", ok=trend.bounded, detail="lambda/sqrt(d) <= 2")
    else:
        shape = CheckRecord(name="increasing_ratio", ok=trend.increasing, detail="lambda/sqrt(d) strictly increasing in q")
    checks = [
        shape,
        CheckRecord(name="edge_probability", ok=trend.edge_probability_ok, detail="d/n = 1/2 - 1/(2q)"),
    ]
    # a family has no single q; only the shared e is reported
    report = RunReport(params={"e": trend.e}, command=config.command, seed=config.seed, result=result, checks=checks)
    report.exit_code = EXIT_OK if all(c.ok for c in checks) else EXIT_REFUTED
    return report


def _cmd_find_q1(config: RunConfig) -> RunReport:
    t = _require_t(config)
    q1 = find_least_q1(t, config.e)
    params = GraphParams(q=q1, e=config.e)
    below: List[int] = []
    q = 5
    while q < q1:
        below.append(q)
        q = next_pythagorean_prime(q)
    minimal = not any(sufficient_condition(GraphParams(q=p, e=config.e), t) for p in below)
    result = {"t": t, "e": config.e, "q1": q1, "eq_main": eq_main_value(params, t), "checked_below": below}
    checks = [
        CheckRecord(name="satisfies", ok=sufficient_condition(params, t)),
        CheckRecord(name="minimal", ok=minimal, detail=f"{len(below)} smaller Pythagorean primes fail"),
    ]
    return RunReport(params=_params_block(params), command=config.command, seed=config.seed, result=result, checks=checks)


def _cmd_report(config: RunConfig) -> RunReport:
    settings = get_settings()
    params = _params(config)
    t = config.t or 2
    g = build_graph(params)
    spectrum_result, checks = _spectrum_block(params)
    spec = closed_form_spectrum(params)
    result: Dict[str, Any] = {"spectrum": spectrum_result}

    result["sufficient_condition"] = {"t": t, "holds": sufficient_condition(params, t), "value": eq_main_value(params, t)}
    try:
        cert = brute_force_ec(
            g, t, budget=config.budget, force=config.force, workers=config.threads,
            residue_distinct=config.residue_distinct,
        )
        result["check_ec"] = _certificate_block(cert)
        checks.append(
            CheckRecord(name="exhaustive", ok=cert.verified, detail=f"t={t}, {cert.subsets_scanned} subsets scanned")
        )
    except BudgetExceededError as e:
        logger.warning("Skipping exhaustive check: %s", e)
        result["check_ec"] = {"skipped": str(e)}

    scan = mixing_scan(g, spec, config.samples, config.seed, workers=config.threads)
    result["mixing"] = {"max_normalized": scan.max_normalized, "lambda": scan.lambda_, "ok": scan.ok}
    checks.append(CheckRecord(name="expander_mixing", ok=scan.ok, detail=f"{scan.violations} violations"))

    qr = quasirandom_stats(g, spec)
    result["quasirandom"] = qr.model_dump()
    cheeger: Dict[str, Any] = {"spectral_lower": cheeger_spectral_lower(spec)}
    if g.n <= settings.cheeger_cap:
        h = cheeger_bruteforce(g)
        cheeger["bruteforce"] = h
        checks.append(CheckRecord(name="cheeger_inequality", ok=h >= cheeger["spectral_lower"] - 1e-12))
    result["cheeger"] = cheeger

    report = RunReport(params=_params_block(params), command=config.command, seed=config.seed, result=result, checks=checks)
    report.exit_code = EXIT_OK if all(c.ok for c in checks) else EXIT_REFUTED
    return report


_COMMANDS: Dict[str, Callable[[RunConfig], RunReport]] = {
    "construct": _cmd_construct,
    "spectrum": _cmd_spectrum,
    "check-ec": _cmd_check_ec,
    "mixing": _cmd_mixing,
    "trend": _cmd_trend,
    "find-q1": _cmd_find_q1,
    "report": _cmd_report,
}


def _refusal(config: RunConfig, exc: Exception, code: int, name: str) -> RunReport:
    report = RunReport(
        command=config.command,
        seed=config.seed,
        checks=[CheckRecord(name=name, ok=False, detail=str(exc))],
    )
    report.exit_code = code
    return report


def run(config: RunConfig) -> RunReport:
    """Execute one command; the report carries the exit code."""
    try:
        report = _COMMANDS[config.command](config)
    except (BudgetExceededError, SizeCapError) as e:
        logger.warning("Refused %s: %s", config.command, e)
        return _refusal(config, e, EXIT_REFUSED, "refused")
    except ReportWriteError as e:
        logger.exception("Could not write output of %s", config.command)
        return _refusal(config, e, EXIT_ERROR, "io_error")
    except EcGraphError as e:
        logger.exception("Failed %s", config.command)
        return _refusal(config, e, EXIT_ERROR, "error")
    except ValueError as e:
        logger.warning("Invalid input for %s: %s", config.command, e)
        return _refusal(config, e, EXIT_INVALID, "invalid_input")
    if report.exit_code == EXIT_OK and not all(c.ok for c in report.checks):
        report.exit_code = EXIT_REFUTED
    return report


# --- rendering -------------------------------------------------------------------


def _round_floats(obj: Any, digits: int) -> Any:
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, digits) for v in obj]
    return obj


def report_payload(report: RunReport) -> Dict[str, Any]:
    return _round_floats(report.model_dump(by_alias=True), get_settings().float_digits)


def render_json(report: RunReport) -> str:
    return json.dumps(report_payload(report), indent=2, ensure_ascii=False) + "\n"


def _render_text_lines(obj: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines: List[str] = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text_lines(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text_lines(item, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(item, ensure_ascii=False)}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def render_text(report: RunReport) -> str:
    return "\n".join(_render_text_lines(report_payload(report))) + "\n"


def emit_report(report: RunReport, format: str, destination: Union[None, str, Path, IO[str]]) -> None:
    """Write the report as JSON or text to a path or an open stream."""
    text = render_json(report) if format == "json" else render_text(report)
    if isinstance(destination, (str, Path)):
        atomic_write_text(destination, text)
        logger.info("Wrote %s report to %s", report.command, destination)
        return
    if destination is None:
        destination = sys.stdout
    try:
        destination.write(text)
    except OSError as e:
        raise ReportWriteError(f"cannot write report to {getattr(destination, 'name', '<stream>')}: {e}") from e
