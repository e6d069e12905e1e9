import argparse
import json
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence

from .abelian import critical_group, read_matrix, smith_group, smith_normal_form
from .config import EXIT_CHECK_FAILED, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE
from .critical import (
    census,
    connected_or_raise,
    critical_ideal_report,
    forbidden_family,
    lemma2_report,
)
from .digraph import Digraph, emit_digraph6, read_digraph, to_json
from .exceptions import CriticalIdealsException, ResourceLimitError
from .ideals import trace_logger
from .lambda_family import (
    missing_lemma3_cases,
    theorem5_row,
    verify_corollaries,
    verify_lemma3,
    verify_theorem5,
)

logger = logging.getLogger(__name__)

PACKAGE_LOGGER = "criticalideals"
FORMATS = ("text", "tsv", "json")


def _emit(lines: Sequence[str]) -> None:
    for line in lines:
        print(line)


def _emit_json(data) -> None:
    print(json.dumps(data, sort_keys=True))


def _bool(value: bool) -> str:
    return "true" if value else "false"


def input_text(value: str) -> str:
    """Digraph text from an argument: the argument itself or the file it names

    Args:
        value (str): digraph6 string, inline JSON arc list or a path to a file holding either

    Raises:
        CriticalIdealsException: the file holds no digraph

    Returns:
        str: JSON text or a single digraph6 line
    """
    if not os.path.isfile(value):
        return value.strip()
    with open(value, "r", encoding="utf-8") as f:
        text = f.read()
    if text.lstrip().startswith("{"):
        return text.strip()
    for line in text.splitlines():
        if line.strip():
            return line.strip()
    raise CriticalIdealsException(f"{value}: no digraph found")


def read_input(value: str) -> Digraph:
    return read_digraph(input_text(value))


# commands


def command_gamma(args: argparse.Namespace) -> int:
    report = critical_ideal_report(read_input(args.input), early_stop=args.early_stop)
    if args.format == "json":
        _emit_json(report.to_dict())
    elif args.format == "tsv":
        columns = [emit_digraph6(report.digraph), str(report.gamma)]
        columns.extend(_bool(verdict) for verdict in report.verdicts)
        _emit(["\t".join(columns)])
    else:
        _emit(report.lines())
    return EXIT_OK


def command_classify(args: argparse.Namespace) -> int:
    digraph = connected_or_raise(read_input(args.input))
    row = theorem5_row(digraph)
    params = str(row.lambda_params) if row.lambda_params is not None else "-"
    if args.format == "json":
        _emit_json(
            {
                "digraph6": row.digraph6,
                "gamma_at_most_one": row.gamma_at_most_one,
                "f_free": row.f_free,
                "lambda": row.lambda_params.to_dict() if row.lambda_params else None,
                "certificate": row.witness or None,
                "agrees": row.agrees,
            }
        )
    elif args.format == "tsv":
        _emit([row.line()])
    else:
        lines = [
            f"gamma<=1: {_bool(row.gamma_at_most_one)}",
            f"f-free: {_bool(row.f_free)}",
            f"lambda: {params}",
        ]
        if row.witness:
            lines.append(f"certificate: {row.witness}")
        _emit(lines)
    if not row.agrees:
        print(f"contradiction: {row.line()}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def command_census(args: argparse.Namespace) -> int:
    report = census(
        args.n, jobs=args.jobs, checkpoint=args.resume, progress=args.progress
    )
    fmt = args.format or "tsv"
    if fmt == "json":
        data = report.to_dict()
        if args.emit_members:
            data["members"] = [
                {"digraph6": row.digraph6, "gamma": row.gamma} for row in report.members()
            ]
        _emit_json(data)
        return EXIT_OK
    if fmt == "tsv":
        _emit(report.tsv_lines())
    else:
        _emit(
            [f"n={report.n} gamma={k} count={count}" for k, count in report.counts.items()]
        )
    if args.emit_members:
        _emit([row.line() for row in report.members()])
    return EXIT_OK


def command_snf(args: argparse.Namespace) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise CriticalIdealsException(f"cannot read {args.file}: {e}") from e
    result = smith_normal_form(read_matrix(text), transforms=args.transforms)
    if args.format == "json":
        _emit_json(result.to_dict())
    elif args.format == "tsv":
        _emit(["\t".join(str(f) for f in result.diagonal)])
    else:
        _emit(result.lines())
    return EXIT_OK


def command_groups(args: argparse.Namespace) -> int:
    digraph = read_input(args.input)
    summaries = {"critical": critical_group(digraph), "smith": smith_group(digraph)}
    if args.format == "json":
        _emit_json({name: summary.to_dict() for name, summary in summaries.items()})
    elif args.format == "tsv":
        _emit(
            [
                "\t".join(
                    [
                        name,
                        ",".join(str(f) for f in summary.factors),
                        str(summary.free_rank),
                        str(summary.unit_count),
                    ]
                )
                for name, summary in summaries.items()
            ]
        )
    else:
        _emit([f"{name}: {summary.render()}" for name, summary in summaries.items()])
    return EXIT_OK


def command_verify_lemma2(args: argparse.Namespace) -> int:
    lines = lemma2_report()
    failed = [line for line in lines if line.gamma != 2 or not line.forbidden]
    names = forbidden_family().names
    incomplete = [line.name for line in lines] != names
    if args.format == "json":
        _emit_json(
            [{"name": line.name, "gamma": line.gamma, "forbidden": line.forbidden} for line in lines]
        )
    else:
        _emit([line.render() for line in lines])
    for line in failed:
        print(f"failed: {line.render()}", file=sys.stderr)
    if incomplete:
        print(
            f"failed: expected {len(names)} lines, one per family member, got {len(lines)}",
            file=sys.stderr,
        )
    return EXIT_CHECK_FAILED if failed or incomplete else EXIT_OK


def command_verify_lemma3(args: argparse.Namespace) -> int:
    checks = verify_lemma3(
        args.max_total, jobs=args.jobs, checkpoint=args.resume, progress=args.progress
    )
    missing = missing_lemma3_cases(checks)
    failed = [check for check in checks if not check.passed]
    if args.format == "json":
        _emit_json(
            {
                "checks": [
                    {
                        "params": check.params.to_dict(),
                        "case": check.case,
                        "first_trivial": check.first_trivial,
                        "printed_matches": check.printed_matches,
                        "amended_matches": check.amended_matches,
                    }
                    for check in checks
                ],
                "uncovered": missing,
            }
        )
    else:
        _emit([check.render() for check in checks])
        _emit([f"uncovered case: {label}" for label in missing])
        findings = sum(1 for check in checks if check.finding)
        _emit([f"checked={len(checks)} failed={len(failed)} findings={findings}"])
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def command_verify_theorem5(args: argparse.Namespace) -> int:
    rows = verify_theorem5(
        args.n, jobs=args.jobs, checkpoint=args.resume, progress=args.progress
    )
    mismatches = [row for row in rows if not row.agrees]
    if args.format == "json":
        _emit_json(
            {
                "n": args.n,
                "classes": len(rows),
                "mismatches": [row.columns() for row in mismatches],
            }
        )
    elif args.format == "tsv":
        _emit([row.line() for row in rows])
    else:
        _emit([f"MISMATCH\t{row.line()}" for row in mismatches])
        _emit([f"n={args.n} classes={len(rows)} agree={len(rows) - len(mismatches)}"])
    return EXIT_CHECK_FAILED if mismatches else EXIT_OK


def command_verify_corollaries(args: argparse.Namespace) -> int:
    checks = verify_corollaries(
        args.max_total, jobs=args.jobs, checkpoint=args.resume, progress=args.progress
    )
    mismatches = [check for check in checks if not check.agrees]
    if args.format == "json":
        _emit_json(
            [
                {
                    "params": check.params.to_dict(),
                    "group": check.group,
                    "predicate": check.predicate,
                    "unit_count": check.unit_count,
                }
                for check in checks
            ]
        )
    else:
        _emit([check.render() for check in checks])
        _emit([f"checked={len(checks)} mismatches={len(mismatches)}"])
    return EXIT_CHECK_FAILED if mismatches else EXIT_OK


def command_convert(args: argparse.Namespace) -> int:
    text = input_text(args.input)
    digraph = read_digraph(text)
    target = args.to
    if target is None:
        target = "digraph6" if text.startswith("{") else "json"
    _emit([emit_digraph6(digraph) if target == "digraph6" else to_json(digraph)])
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "gamma": command_gamma,
    "classify": command_classify,
    "census": command_census,
    "snf": command_snf,
    "groups": command_groups,
    "verify-lemma2": command_verify_lemma2,
    "verify-lemma3": command_verify_lemma3,
    "verify-theorem5": command_verify_theorem5,
    "verify-corollaries": command_verify_corollaries,
    "convert": command_convert,
}


def _positive(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="criticalideals",
        description="Critical ideals of digraphs: algebraic co-rank, Smith groups and verification suites.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    parser.add_argument(
        "--trace", action="store_true", help="log every Groebner critical pair on stderr"
    )
    parser.add_argument("--format", choices=FORMATS, default=None, help="report format")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    gamma = commands.add_parser("gamma", help="algebraic co-rank and per-index triviality")
    gamma.add_argument("input", help="digraph6 string, JSON arc list or file")
    gamma.add_argument(
        "--early-stop", action="store_true", help="skip ideals after the first nontrivial one"
    )

    classify = commands.add_parser("classify", help="gamma<=1, forbidden-family and Lambda verdicts")
    classify.add_argument("input", help="digraph6 string, JSON arc list or file")

    census_parser = commands.add_parser("census", help="count gamma-critical digraphs by gamma")
    census_parser.add_argument("--n", type=int, required=True, help="vertex count, 2..5")
    census_parser.add_argument(
        "--emit-members", action="store_true", help="print every gamma-critical class"
    )

    snf = commands.add_parser("snf", help="Smith normal form of an integer matrix file")
    snf.add_argument("file", help="JSON list of rows or whitespace-separated rows")
    snf.add_argument("--transforms", action="store_true", help="also print U and V")

    groups = commands.add_parser("groups", help="critical group and Smith group")
    groups.add_argument("input", help="digraph6 string, JSON arc list or file")

    commands.add_parser("verify-lemma2", help="gamma and forbidden status of the 17 family members")

    lemma3 = commands.add_parser("verify-lemma3", help="closed forms of I_2 on Lambda digraphs")
    lemma3.add_argument("--max-total", type=_positive, default=6)

    theorem5 = commands.add_parser(
        "verify-theorem5", help="three-way equivalence on every connected class"
    )
    theorem5.add_argument("--n", type=_positive, required=True, help="vertex count, 1..5")

    corollaries = commands.add_parser(
        "verify-corollaries", help="unit-count predicates against Smith normal forms"
    )
    corollaries.add_argument("--max-total", type=_positive, default=6)

    for long_running in (census_parser, lemma3, theorem5, corollaries):
        long_running.add_argument("--jobs", type=_positive, default=1, help="worker processes")
        long_running.add_argument("--resume", metavar="FILE", help="checkpoint file")
        long_running.add_argument("--progress", action="store_true", help="progress bar on stderr")

    convert = commands.add_parser("convert", help="digraph6 <-> JSON arc list")
    convert.add_argument("input", help="digraph6 string, JSON arc list or file")
    convert.add_argument("--to", choices=("digraph6", "json"), default=None)
    return parser


def configure_logging(verbose: int, trace: bool) -> None:
    """Send package logs to stderr at the requested verbosity"""
    package_logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(package_logger.handlers):
        if not isinstance(handler, logging.NullHandler):
            package_logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    package_logger.addHandler(handler)
    if verbose >= 2:
        package_logger.setLevel(logging.DEBUG)
    elif verbose == 1:
        package_logger.setLevel(logging.INFO)
    else:
        package_logger.setLevel(logging.WARNING)
    trace_logger.setLevel(logging.DEBUG if trace else logging.WARNING)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one command and return its exit code

    Args:
        argv (List[str], optional): arguments without the program name

    Returns:
        int: 0 all checks pass, 1 a check failed, 2 usage or input error, 3 resource cap hit
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    configure_logging(args.verbose, args.trace)
    if args.command != "census" and args.format is None:
        args.format = "text"
    try:
        return COMMANDS[args.command](args)
    except ResourceLimitError as e:
        logger.debug(f"{args.command} stopped at the step cap", exc_info=True)
        print(f"resource limit: {e.message}", file=sys.stderr)
        return EXIT_RESOURCE
    except CriticalIdealsException as e:
        logger.debug(f"{args.command} rejected its input", exc_info=True)
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
