"""
Command tree: ``eval``, ``table``, ``check`` and ``bench``.

Exit status is 0 on success, 1 when a check finds a mismatch and 2 on usage
or precondition errors. Results go to stdout, diagnostics to stderr.
"""

from typing import Any, Dict, List, Optional, Sequence
import argparse
import csv
import io
import json
import sys

from pydantic import ValidationError

from ..config import settings
from ..models import CheckReport, EvalRequest, Family, MeetMode, OutputFormat
from ..services.bench_service import run_bench
from ..services.check_service import run_check
from ..services.counting_service import Evaluation, FormulaInvariantError, Term
from ..services.evaluation_service import build_request, decimal_string, evaluate, plain_parameters
from ..services.numtheory import DomainError
from ..services.table_service import build_rows, render_table
from ..utils.input_parser import InputParseError, parse_element_set, parse_int_range, parse_integer
from ..utils.logger_config import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

INTEGER_PARAMETERS = ("l", "m", "n", "k", "m1", "l2", "m2")
SET_PARAMETERS = ("base", "meet")

FAMILY_NAMES = [family.value for family in Family]


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Global flags, accepted before or after the subcommand"""
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=default(OutputFormat.PLAIN.value),
                        help="output format (default: plain)")
    parser.add_argument("--verbose", action="store_true", default=default(False),
                        help="show the divisor-sum terms of eval")
    parser.add_argument("--oracle-cap", type=int, default=default(None), metavar="N",
                        help=f"largest universe the oracle enumerates (default: {settings.ORACLE_CAP})")
    parser.add_argument("--seed", type=int, default=default(None), metavar="S",
                        help=f"sampler seed (default: {settings.DEFAULT_SEED})")


def _parameter_flags(parser: argparse.ArgumentParser, ranges: bool) -> None:
    kind = "integer or a..b range" if ranges else "integer"
    for name in INTEGER_PARAMETERS:
        parser.add_argument(f"--{name}", metavar=name.upper(), help=kind)
    for name in SET_PARAMETERS:
        parser.add_argument(f"--{name}", metavar="A", help="comma-separated elements, e.g. 4,6")
    parser.add_argument("--mode", choices=[mode.value for mode in MeetMode],
                        help=f"meet-sum reading (default: {settings.DEFAULT_MEET_MODE})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coprime-count",
        description="Exact counts of relatively prime subsets, checked against brute-force enumeration",
    )
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    commands = parser.add_subparsers(dest="command", required=True)

    eval_parser = commands.add_parser("eval", parents=[common], help="evaluate one family at one point")
    eval_parser.add_argument("family", choices=FAMILY_NAMES)
    _parameter_flags(eval_parser, ranges=False)

    table_parser = commands.add_parser("table", parents=[common], help="tabulate a family over ranges")
    table_parser.add_argument("family", choices=FAMILY_NAMES)
    _parameter_flags(table_parser, ranges=True)

    check_parser = commands.add_parser("check", parents=[common], help="verify formulas against the oracle")
    check_parser.add_argument("families", nargs="+", choices=FAMILY_NAMES, metavar="family")
    check_parser.add_argument("--mode", choices=[mode.value for mode in MeetMode],
                              help="meet-sum reading, applied to meet families")
    check_parser.add_argument("--max-m", type=int, default=None, help=f"largest m (default: {settings.CHECK_MAX_M})")
    check_parser.add_argument("--max-n", type=int, default=None, help=f"largest n (default: {settings.CHECK_MAX_N})")
    check_parser.add_argument("--samples", type=int, default=None,
                              help=f"random tuples for superset/meet families (default: {settings.CHECK_SAMPLES})")
    check_parser.add_argument("--workers", type=int, default=None, help="threads per family")

    bench_parser = commands.add_parser("bench", parents=[common], help="time closed form against enumeration")
    bench_parser.add_argument("family", choices=FAMILY_NAMES)
    _parameter_flags(bench_parser, ranges=False)
    bench_parser.add_argument("--reps", type=int, default=None,
                              help=f"timed repetitions (default: {settings.BENCH_REPETITIONS})")
    return parser


def _point(args: argparse.Namespace) -> Dict[str, Any]:
    parameters: Dict[str, Any] = {}
    for name in INTEGER_PARAMETERS:
        value = getattr(args, name)
        if value is not None:
            parameters[name] = parse_integer(value)
    for name in SET_PARAMETERS:
        value = getattr(args, name)
        if value is not None:
            parameters[name] = parse_element_set(value)
    return parameters


def _ranges(args: argparse.Namespace) -> Dict[str, List[Any]]:
    ranges: Dict[str, List[Any]] = {}
    for name in INTEGER_PARAMETERS:
        value = getattr(args, name)
        if value is not None:
            ranges[name] = parse_int_range(value)
    for name in SET_PARAMETERS:
        value = getattr(args, name)
        if value is not None:
            ranges[name] = [parse_element_set(value)]
    return ranges


def _mode(args: argparse.Namespace) -> Optional[MeetMode]:
    return MeetMode(args.mode) if args.mode else None


def _term_json(term: Term) -> Dict[str, Any]:
    entry: Dict[str, Any] = {"d": term.d, "mu": term.mu}
    if term.exponent is not None:
        entry["exponent"] = term.exponent
    else:
        entry["binomial"] = [term.top, term.bottom]
    entry["term"] = decimal_string(term.value)
    if term.subset is not None:
        entry["subset"] = list(term.subset)
        entry["sign"] = term.sign
    return entry


def _term_text(term: Term) -> str:
    factor = f"2^{term.exponent}" if term.exponent is not None else f"C({term.top},{term.bottom})"
    prefix = ""
    if term.subset is not None:
        prefix = f"X={{{','.join(str(x) for x in term.subset)}}} sign={term.sign:+d} "
    return f"{prefix}d={term.d} mu={term.mu:+d} {factor} term={decimal_string(term.value)}"


def _render_eval(request: EvalRequest, evaluation: Evaluation, output_format: OutputFormat,
                 verbose: bool) -> str:
    count = decimal_string(evaluation.count)
    if output_format is OutputFormat.JSON:
        payload: Dict[str, Any] = {**plain_parameters(request), "count": count}
        if verbose:
            payload["terms"] = [_term_json(term) for term in evaluation.terms]
            payload["raw_sum"] = decimal_string(evaluation.raw_sum)
            payload["correction"] = evaluation.correction
        return json.dumps(payload, separators=(",", ":")) + "\n"
    if output_format is OutputFormat.CSV:
        return render_table(request.family, [{**request.parameters, "count": evaluation.count}], output_format)
    lines = [count]
    if verbose:
        lines.extend(_term_text(term) for term in evaluation.terms)
        lines.append(f"raw_sum={decimal_string(evaluation.raw_sum)} correction={evaluation.correction}")
    return "".join(line + "\n" for line in lines)


def _render_reports(reports: List[CheckReport], output_format: OutputFormat) -> str:
    if output_format is OutputFormat.JSON:
        payload = [report.model_dump(mode="json") for report in reports]
        return json.dumps(payload, separators=(",", ":")) + "\n"
    if output_format is OutputFormat.CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["family", "mode", "grid", "cases", "mismatches"])
        for report in reports:
            writer.writerow([report.family.value, report.mode.value if report.mode else "", report.grid,
                             report.cases, len(report.mismatches)])
        return buffer.getvalue()

    lines = []
    for report in reports:
        mode = f" [{report.mode.value}]" if report.mode else ""
        lines.append(f"{report.family.value}{mode}: {report.cases} cases ({report.grid}), "
                     f"{len(report.mismatches)} mismatches")
        for mismatch in report.mismatches:
            lines.append(f"  {mismatch.parameters}: formula={mismatch.formula} oracle={mismatch.oracle}")
            if mismatch.witnesses:
                lines.append(f"    witnesses: {mismatch.witnesses}")
            if mismatch.note:
                lines.append(f"    note: {mismatch.note}")
    return "".join(line + "\n" for line in lines)


def cmd_eval(args: argparse.Namespace) -> int:
    request = build_request(Family(args.family), _point(args), _mode(args))
    evaluation = evaluate(request)
    sys.stdout.write(_render_eval(request, evaluation, OutputFormat(args.format), args.verbose))
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    family = Family(args.family)
    rows = build_rows(family, _ranges(args), _mode(args))
    sys.stdout.write(render_table(family, rows, OutputFormat(args.format)))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    mode = _mode(args)
    reports = []
    for name in args.families:
        family = Family(name)
        reports.append(run_check(
            family,
            mode=mode if family.is_meet else None,
            max_m=args.max_m,
            max_n=args.max_n,
            samples=args.samples,
            seed=args.seed,
            cap=args.oracle_cap,
            workers=args.workers,
        ))
    sys.stdout.write(_render_reports(reports, OutputFormat(args.format)))
    return EXIT_OK if all(report.ok for report in reports) else EXIT_MISMATCH


def cmd_bench(args: argparse.Namespace) -> int:
    request = build_request(Family(args.family), _point(args), _mode(args))
    report = run_bench(request, repetitions=args.reps, cap=args.oracle_cap)
    sys.stdout.write(report.model_dump_json() + "\n")
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "table": cmd_table,
    "check": cmd_check,
    "bench": cmd_bench,
}


def _describe(error: Exception) -> str:
    if isinstance(error, ValidationError):
        return "; ".join(detail["msg"].removeprefix("Value error, ") for detail in error.errors())
    if isinstance(error, DomainError) and error.constraint:
        return f"{error.message} (requires {error.constraint})"
    return str(error)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command and return its exit status"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        return COMMANDS[args.command](args)
    except (ValidationError, DomainError, InputParseError) as e:
        logger.debug(f"Rejected {args.command} request: {e}")
        sys.stderr.write(f"error: {_describe(e)}\n")
        return EXIT_USAGE
    except FormulaInvariantError as e:
        logger.error(f"Internal invariant violated: {e.message}")
        raise
