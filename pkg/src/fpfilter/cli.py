"""Command-line solver and verifier.

Exit codes: 0 satisfiable / checks pass, 1 unsatisfiable / checks fail,
2 search budget exhausted, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import sys

from . import problem, report
from .engine import SolveConfig
from .minifloat import format_by_name
from .oracle import run_property_suite

EXIT_SAT = 0
EXIT_UNSAT = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3


def _load(path: str, force_format: str | None = None
          ) -> tuple[problem.ProblemFile, object]:
    with open(path, encoding="utf-8") as fh:
        pf = problem.parse(fh.read(), force_format=force_format)
    return pf, problem.build_network(pf)


def _cmd_solve(args: argparse.Namespace) -> int:
    pf, net = _load(args.path, args.format)
    if args.trace:
        net.trace = []
    if args.maximize and args.maximize not in net.variable_names():
        raise problem.ProblemError(0, f"unknown variable {args.maximize!r}")
    config = SolveConfig(
        node_limit=args.nodes,
        time_limit=args.time,
        use_maxulp=not args.no_maxulp,
        maximize=args.maximize,
    )
    result = net.solve(config)
    doc = report.solve_report(result, net.constants, net.trace)
    if args.report_dir:
        report.write_solve_outputs(doc, args.report_dir)
    print(report.dump_json(doc) if args.json else report.solve_text(doc))
    return {"SAT": EXIT_SAT, "UNSAT": EXIT_UNSAT, "UNKNOWN": EXIT_UNKNOWN}[
        result.verdict
    ]


def _cmd_check(args: argparse.Namespace) -> int:
    pf, net = _load(args.path)
    doc = {
        "schema": report.SCHEMA,
        "command": "check",
        "format": pf.fmt_name,
        "variables": len(pf.variables),
        "constants": len(pf.constants),
        "constraints": len(pf.constraints),
    }
    if args.json:
        print(report.dump_json(doc))
    else:
        print(
            f"{args.path}: format {pf.fmt_name}, {len(pf.variables)} variables, "
            f"{len(pf.constants)} constants, {len(pf.constraints)} constraints"
        )
        print(problem.serialize(pf), end="")
    return EXIT_SAT


def _cmd_explain(args: argparse.Namespace) -> int:
    pf, net = _load(args.path, args.format)
    net.trace = []
    status = net.propagate(use_maxulp=not args.no_maxulp)
    doc = report.propagate_report(net, status, net.trace)
    print(report.dump_json(doc) if args.json else report.propagate_text(doc))
    return EXIT_SAT if status == "FIXPOINT" else EXIT_UNSAT


def _cmd_verify(args: argparse.Namespace) -> int:
    fmt = format_by_name(args.format)
    rep = run_property_suite(fmt)
    doc = report.verify_report(rep)
    if args.report_dir:
        report.write_verify_outputs(doc, args.report_dir)
    print(report.dump_json(doc) if args.json else report.verify_text(doc))
    return EXIT_SAT if rep.passed else EXIT_UNSAT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fpfilter",
        description="interval constraint solver over binary floating-point domains",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a constraint problem file")
    solve.add_argument("path")
    solve.add_argument("--format", metavar="NAME",
                       help="override the file's working format")
    solve.add_argument("--no-maxulp", action="store_true",
                       help="disable the max-ULP operand-bound filters")
    solve.add_argument("--nodes", type=int, default=10 ** 6,
                       help="search node budget (default 1e6)")
    solve.add_argument("--time", type=float, default=60.0,
                       help="wall-clock budget in seconds (default 60)")
    solve.add_argument("--maximize", metavar="VAR",
                       help="search for the largest value of VAR")
    solve.add_argument("--trace", action="store_true",
                       help="log every narrowing step")
    solve.add_argument("--json", action="store_true")
    solve.add_argument("--report-dir", metavar="DIR",
                       help="write stats CSV and figure into DIR")
    solve.set_defaults(fn=_cmd_solve)

    check = sub.add_parser("check", help="parse and echo a problem file")
    check.add_argument("path")
    check.add_argument("--json", action="store_true")
    check.set_defaults(fn=_cmd_check)

    explain = sub.add_parser(
        "explain", help="propagate once and show every narrowing step"
    )
    explain.add_argument("path")
    explain.add_argument("--format", metavar="NAME",
                         help="override the file's working format")
    explain.add_argument("--no-maxulp", action="store_true")
    explain.add_argument("--json", action="store_true")
    explain.set_defaults(fn=_cmd_explain)

    verify = sub.add_parser(
        "verify", help="run the exhaustive property suite on a tiny format"
    )
    verify.add_argument("format", help="binary32, binary64, tiny, or custom(p,emax,emin)")
    verify.add_argument("--json", action="store_true")
    verify.add_argument("--report-dir", metavar="DIR",
                        help="write property CSV and figure into DIR")
    verify.set_defaults(fn=_cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (problem.ProblemError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
