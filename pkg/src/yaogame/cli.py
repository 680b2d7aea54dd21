"""Command-line front end.

Exit codes: 0 success, 1 a certificate failed under ``--require-pass``,
2 usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import hashlib
import io
import json
import logging
import math
import sys
import time
from typing import Any, Sequence

from . import __version__
from .core import MixedStrategy, RatioMatrix, validate
from .equalizer import (
    EqualizerSolution,
    full_support_equalizer_f,
    full_support_equalizer_g,
    support_search,
)
from .errors import EnumerationRefused, NoFeasibleEqualizer, NoSupportFound, YaoGameError
from .problems import (
    SkiRentalSpec,
    as_ratio,
    dump_problem,
    from_file,
    random_instance,
    read_distribution,
    ski_rental,
    ski_rental_closed_form,
)
from .solver import SolveResult, SolverConfig, best_response_row, solve
from .verify import CHECKS, Certificate, yao_lower_bound

logger = logging.getLogger(__name__)

LEMMAS = ("sufficient", "necessary", "saddle")


class UsageError(YaoGameError):
    pass


def _strategy(s: MixedStrategy) -> dict[str, float]:
    return {str(lab): w for lab, w in zip(s.labels, s.weights.tolist())}


def _solve_dict(res: SolveResult) -> dict[str, Any]:
    return {
        "method": res.method,
        "value": res.value,
        "upper": res.upper,
        "lower": res.lower,
        "gap": res.gap,
        "iterations": res.pivots_or_iters,
        "f_star": _strategy(res.f_star),
        "g_star": _strategy(res.g_star),
        "diagnostics": {k: v for k, v in res.diagnostics.items()},
    }


def _cert_dict(c: Certificate) -> dict[str, Any]:
    return {
        "kind": c.kind,
        "passed": c.passed,
        "constant": c.witnessed_constant,
        "max_deviation": c.max_deviation,
        "tolerance": c.tolerance,
        "f_support": sorted(str(x) for x in c.f_support),
        "g_support": sorted(str(x) for x in c.g_support),
        "details": c.details,
        "metrics": dict(c.metrics),
    }


def _eq_dict(side: str, sol: EqualizerSolution | None, error: str | None = None) -> dict:
    if sol is None:
        return {"side": side, "found": False, "error": error}
    return {
        "side": side,
        "found": True,
        "constant": sol.constant,
        "residual": sol.residual,
        "support": [str(x) for x in sol.support],
        "strategy": _strategy(sol.strategy),
        "alternates": [[list(map(str, a)), list(map(str, b))] for a, b in sol.alternates],
    }


def _problem_summary(r: RatioMatrix) -> dict[str, Any]:
    diag = validate(r)
    return {
        "rows": r.shape[0],
        "cols": r.shape[1],
        "row_labels": [str(x) for x in r.row_labels],
        "col_labels": [str(x) for x in r.col_labels],
        "r_min": diag.min_entry,
        "r_max": diag.max_entry,
        "ratio_bound_holds": diag.ratio_bound_holds,
        "dominated_rows": [[str(a), str(b)] for a, b in diag.dominated_rows],
        "dominated_cols": [[str(a), str(b)] for a, b in diag.dominated_cols],
    }


def _load(args) -> tuple[RatioMatrix, str]:
    """Resolve the problem source; the digest covers its canonical serialization."""
    if args.file is not None and args.skirental is not None:
        raise UsageError("give either --file or --skirental, not both")
    if args.file is not None:
        problem = from_file(args.file)
    elif args.skirental is not None:
        horizon = args.horizon if args.horizon is not None else 2 * args.skirental
        problem = ski_rental(SkiRentalSpec(args.skirental, horizon))
    else:
        raise UsageError("a problem is required: --file PATH or --skirental B")
    digest = hashlib.sha256(dump_problem(problem).encode("utf-8")).hexdigest()
    return as_ratio(problem), digest


def _config(args) -> SolverConfig:
    return SolverConfig(
        tolerance=args.solver_tol,
        method="fictitious_play" if args.method == "fp" else "simplex_lp",
        fp_iterations=args.fp_iters,
        seed=args.seed,
    )


def _finite(obj: Any, path: str = "report") -> None:
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ArithmeticError(f"non-finite number at {path}")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _finite(v, f"{path}.{k}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _finite(v, f"{path}[{i}]")


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        out = []
        for i, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}[{i}]"))
        return out
    if isinstance(obj, list):
        return [(prefix, " ".join(map(str, obj)))]
    return [(prefix, obj)]


def _cell(value: Any) -> Any:
    # repr of a float round-trips exactly
    return repr(float(value)) if isinstance(value, float) else value


def _render(report: dict, fmt: str, table: list[dict] | None = None) -> str:
    _finite(report)
    if fmt == "report":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if table is not None:
        header = list(table[0]) if table else []
        writer.writerow(header)
        for row in table:
            writer.writerow([_cell(row[h]) for h in header])
    else:
        writer.writerow(["key", "value"])
        for key, value in _flatten(report):
            writer.writerow([key, _cell(value)])
    return buf.getvalue()


def _envelope(args, command: str, digest: str | None) -> dict[str, Any]:
    head: dict[str, Any] = {"tool": "yaogame", "version": __version__, "command": command}
    if digest is not None:
        head["input_digest"] = digest
    head["seed"] = args.seed
    return head


def _certificates(r, f, g, lemmas, tol) -> list[Certificate]:
    return [CHECKS[name](r, f, g, tol) for name in lemmas]


def cmd_solve(args) -> tuple[dict, list[Certificate], list[dict] | None]:
    r, digest = _load(args)
    report = _envelope(args, "solve", digest)
    report["problem"] = _problem_summary(r)
    res = solve(r, _config(args))
    report["solve"] = _solve_dict(res)
    certs = []
    if args.certify:
        certs = _certificates(r, res.f_star, res.g_star, LEMMAS, args.tol)
        report["certificates"] = [_cert_dict(c) for c in certs]
    return report, certs, None


def cmd_bound(args):
    r, digest = _load(args)
    g = read_distribution(args.g, r.col_labels)
    report = _envelope(args, "bound", digest)
    report["problem"] = _problem_summary(r)
    best, _ = best_response_row(r, g)
    report["bound"] = {
        "g": _strategy(g),
        "lower_bound": yao_lower_bound(r, g),
        "best_response": str(best),
    }
    return report, [], None


def cmd_verify(args):
    r, digest = _load(args)
    f = read_distribution(args.f, r.row_labels)
    g = read_distribution(args.g, r.col_labels)
    lemmas = LEMMAS if args.lemma == "all" else (args.lemma,)
    certs = _certificates(r, f, g, lemmas, args.tol)
    report = _envelope(args, "verify", digest)
    report["problem"] = _problem_summary(r)
    report["f"] = _strategy(f)
    report["g"] = _strategy(g)
    report["certificates"] = [_cert_dict(c) for c in certs]
    return report, certs, None


def cmd_equalize(args):
    r, digest = _load(args)
    report = _envelope(args, "equalize", digest)
    report["problem"] = _problem_summary(r)
    outcomes = []
    certs: list[Certificate] = []
    if args.support == "full":
        sols = {}
        for side, fn in (("f", full_support_equalizer_f), ("g", full_support_equalizer_g)):
            try:
                sols[side] = fn(r)
                outcomes.append(_eq_dict(side, sols[side]))
            except NoFeasibleEqualizer as exc:
                outcomes.append(_eq_dict(side, None, f"{type(exc).__name__}: {exc}"))
        if len(sols) == 2:
            certs = _certificates(r, sols["f"].strategy, sols["g"].strategy, ("sufficient",), args.tol)
    else:
        try:
            f_sol, g_sol = support_search(r, args.max_support)
        except (NoSupportFound, EnumerationRefused) as exc:
            outcomes.append(_eq_dict("pair", None, f"{type(exc).__name__}: {exc}"))
        else:
            outcomes += [_eq_dict("f", f_sol), _eq_dict("g", g_sol)]
            certs = _certificates(r, f_sol.strategy, g_sol.strategy, ("saddle",), args.tol)
    report["equalizer"] = outcomes
    if certs:
        report["certificates"] = [_cert_dict(c) for c in certs]
    return report, certs, None


def cmd_sweep(args):
    if args.b_min < 1 or args.b_max < args.b_min:
        raise UsageError("need 1 <= --b-min <= --b-max")
    report = _envelope(args, "skirental-sweep", None)
    config = _config(args)
    rows = []
    for b in range(args.b_min, args.b_max + 1):
        if args.powers_of_two and b & (b - 1):
            continue
        n = args.horizon_factor * b
        res = solve(as_ratio(ski_rental(SkiRentalSpec(b, n))), config)
        closed = ski_rental_closed_form(b)
        rows.append(
            {
                "B": b,
                "N": n,
                "value": res.value,
                "closed_form": closed,
                "abs_error": abs(res.value - closed),
                "gap": res.gap,
            }
        )
    report["sweep"] = rows
    return report, [], rows


def cmd_random(args):
    r = random_instance(args.rows, args.cols, args.lo, args.hi, args.seed)
    if args.emit_problem:
        return None, [], dump_problem(r)
    digest = hashlib.sha256(dump_problem(r).encode("utf-8")).hexdigest()
    report = _envelope(args, "random", digest)
    report["problem"] = _problem_summary(r)
    report["ratio"] = r.r.tolist()
    res = solve(r, _config(args))
    report["solve"] = _solve_dict(res)
    return report, [], None


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--file", help="problem file (JSON, kind 'ratio' or 'costs')")
    p.add_argument("--skirental", type=int, metavar="B", help="ski rental with buy price B")
    p.add_argument("--horizon", type=int, metavar="N", help="ski rental horizon (default 2B)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-6, help="certification tolerance")
    common.add_argument("--solver-tol", type=float, default=1e-9, help="solver tolerance")
    common.add_argument("--method", choices=("simplex", "fp"), default="simplex")
    common.add_argument("--fp-iters", type=int, default=100_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--require-pass", action="store_true",
                        help="exit 1 if any certificate fails")
    common.add_argument("--deterministic", action="store_true",
                        help="zero the timing field so reports are byte-identical")
    common.add_argument("--format", choices=("report", "csv"), default="report")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="yaogame",
        description="Solve and certify randomized online algorithms as zero-sum ratio games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="compute the game value and f*, g*")
    _add_problem_args(p)
    p.add_argument("--certify", action="store_true", help="certify the solver output")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("bound", parents=[common], help="lower bound from a random input")
    _add_problem_args(p)
    p.add_argument("--g", required=True, help="input distribution: file, uniform or point:<label>")
    p.set_defaults(handler=cmd_bound)

    p = sub.add_parser("verify", parents=[common], help="check optimality conditions")
    _add_problem_args(p)
    p.add_argument("--f", required=True, help="algorithm distribution")
    p.add_argument("--g", required=True, help="input distribution")
    p.add_argument("--lemma", choices=LEMMAS + ("all",), default="all")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("equalize", parents=[common], help="construct equalizing strategies")
    _add_problem_args(p)
    p.add_argument("--support", choices=("full", "search"), default="full")
    p.add_argument("--max-support", type=int, default=None)
    p.set_defaults(handler=cmd_equalize)

    p = sub.add_parser("skirental-sweep", parents=[common], help="solve ski rental over a range of B")
    p.add_argument("--b-min", type=int, required=True)
    p.add_argument("--b-max", type=int, required=True)
    p.add_argument("--horizon-factor", type=int, default=2, help="N = factor * B")
    p.add_argument("--powers-of-two", action="store_true", help="only B that are powers of two")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("random", parents=[common], help="generate and solve a random instance")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--lo", type=float, default=1.0)
    p.add_argument("--hi", type=float, default=10.0)
    p.add_argument("--emit-problem", action="store_true", help="print the problem file and stop")
    p.set_defaults(handler=cmd_random)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    start = time.perf_counter()
    try:
        report, certs, extra = args.handler(args)
    except UsageError as exc:
        print(f"yaogame: {exc}", file=stderr)
        parser.print_usage(stderr)
        return 2
    except YaoGameError as exc:
        print(f"yaogame: {type(exc).__name__}: {exc}", file=stderr)
        return 2
    except OSError as exc:
        print(f"yaogame: {exc}", file=stderr)
        return 2

    if report is None:
        stdout.write(extra)
        return 0
    report["timing_seconds"] = 0.0 if args.deterministic else time.perf_counter() - start
    table = extra if isinstance(extra, list) else None
    stdout.write(_render(report, args.format, table))
    if args.require_pass and not all(c.passed for c in certs):
        return 1
    return 0


def main() -> None:
    sys.exit(run())
