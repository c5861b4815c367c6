"""``mucalc`` command-line front end.

Exit codes: 0 when every check passes, 1 when an assertion fails, 2 on usage,
parse or type errors.  ``equiv`` exits 0 for equal, 1 for distinct, 2 for unknown.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from mucalc import ops
from mucalc.demo import demo_nat, demo_tree
from mucalc.report import EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunReport
from mucalc.script import Options, _load, check_script, run_script
from mucalc.syntax.parser import ParseError
from mucalc.typecheck import MuTypeError
from mucalc.verdict import DISTINCT, EQUAL

EQUIV_EXIT = {EQUAL: EXIT_OK, DISTINCT: EXIT_FAIL}


def _read(path: str) -> str:
    try:
        return _load(path)
    except OSError as exc:
        raise ops.UsageError(f"cannot read {path}: {exc.strerror or exc}")


def _context(args) -> ops.TermContext:
    decls = _read(args.decls) if args.decls else None
    return ops.TermContext(decls, ops.parse_bindings(args.var), ops.parse_bindings(args.cvar))


def cmd_check(args) -> RunReport:
    return check_script(_read(args.file))


def cmd_run(args) -> RunReport:
    return run_script(args.file, Options(args.fuel, args.samples, args.seed))


def cmd_normalize(args) -> RunReport:
    report, traces = ops.normalize_terms(_context(args), args.expr, args.fuel, args.eta)
    if args.trace and not args.json:
        for text, trace in zip(args.expr, traces):
            print(f"{text}:")
            for s in trace:
                print(f"  {s.rule:<18} at {s.position}")
    return report


def cmd_equiv(args) -> RunReport:
    if len(args.expr) != 2:
        raise ops.UsageError("equiv needs exactly two -e terms")
    return ops.equiv_terms(_context(args), args.expr[0], args.expr[1], args.fuel)


def cmd_focal(args) -> RunReport:
    return ops.focal_terms(_context(args), args.expr, args.samples, args.seed, args.fuel)


def cmd_cps(args) -> RunReport:
    return ops.cps_report(_context(args), args.type or (), args.expr or (), args.symbols)


def cmd_demo(args) -> RunReport:
    match args.kind:
        case "nat":
            return demo_nat(args.max, args.fuel)
        case "list":
            ctx = _context(args) if args.elem is not None else None
            return ops.list_demo(args.len, args.elem, ctx, args.fuel)
        case "tree":
            return demo_tree(args.depth, fuel=args.fuel)
    raise ops.UsageError(f"unknown demo {args.kind}")


def render(report: RunReport) -> str:
    """Human-readable report: one line per record, then a summary line."""
    lines = []
    for r in report.records:
        if r.kind == "cps-type":
            lines.append(r.output or "")
            continue
        mark = "ok  " if r.passed else "FAIL"
        lines.append(f"{mark} {r.verdict:<9} {' | '.join(r.inputs)}")
        if r.output is not None:
            lines.append(f"     => {r.output}")
        if not r.passed and r.reason:
            lines.append(f"     {r.reason}")
    if report.error:
        lines.append(f"error: {report.error}")
    if report.command != "cps" or report.error:
        s = report.summary
        counts = ", ".join(f"{k} {v}" for k, v in s.verdicts.items())
        lines.append(f"{s.passed}/{s.total} passed" + (f" ({counts})" if counts else ""))
    return "\n".join(lines)


# ---------------------------------------------------------------- argument parsing


def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    """Global flags, accepted before or after the subcommand."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False),
                   help="emit the run report as JSON")
    p.add_argument("--fuel", type=int, default=d(None),
                   help="rewrite step budget (default: $MUCALC_FUEL or 10000)")
    p.add_argument("--samples", type=int, default=d(20), help="samples for randomized checks")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized generation")


def _term_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--decls", metavar="FILE",
                   help="script whose declarations are in scope (bundled names allowed)")
    p.add_argument("--var", action="append", default=[], metavar="x:TYPE")
    p.add_argument("--cvar", action="append", default=[], metavar="a:TYPE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mucalc", description=__doc__.splitlines()[0])
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(parent, name, help, fn=None):
        p = parent.add_parser(name, help=help)
        _globals(p, suppress=True)
        if fn is not None:
            p.set_defaults(fn=fn)
        return p

    p = add(sub, "check", "type-check a script", cmd_check)
    p.add_argument("file")
    p = add(sub, "run", "run a script's assertions", cmd_run)
    p.add_argument("file")
    p = add(sub, "normalize", "normal form of a term", cmd_normalize)
    p.add_argument("-e", "--expr", action="append", required=True)
    p.add_argument("--eta", action="store_true", help="also contract eta redexes")
    p.add_argument("--trace", action="store_true", help="print the rewrite trace")
    _term_flags(p)
    p = add(sub, "equiv", "decide M == N", cmd_equiv)
    p.add_argument("-e", "--expr", action="append", required=True)
    _term_flags(p)
    p = add(sub, "focal", "certify or test focality of a function", cmd_focal)
    p.add_argument("-e", "--expr", action="append", required=True)
    _term_flags(p)
    p = add(sub, "cps", "continuation-passing translation of a type or term", cmd_cps)
    p.add_argument("--type", action="append")
    p.add_argument("-e", "--expr", action="append")
    p.add_argument("--symbols", action="store_true", help="print types as ⊤ ⊥ × + → μ")
    _term_flags(p)
    p = add(sub, "demo", "fold equations of the derived data types", cmd_demo)
    demo = p.add_subparsers(dest="kind", required=True)
    d = add(demo, "nat", "fold(g, f) #n == f^n (g unit)")
    d.add_argument("--max", type=int, default=20, help="check numerals 0 .. MAX-1")
    d = add(demo, "list", "nil and cons equations of the list fold")
    d.add_argument("--len", type=int, default=8)
    d.add_argument("--elem", help="element term (free names become constants of type B)")
    _term_flags(d)
    d = add(demo, "tree", "leaf and fork equations of the tree fold")
    d.add_argument("--depth", type=int, default=4)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 2 on usage errors, 0 for --help
        return int(exc.code or 0)
    try:
        report = args.fn(args)
        code = report.exit_code
        if args.command == "equiv":
            code = EQUIV_EXIT.get(report.records[0].verdict, EXIT_USAGE)
    except (ops.UsageError, ParseError) as exc:
        report, code = RunReport(command=args.command).fail(str(exc)), EXIT_USAGE
    except MuTypeError as exc:
        report, code = RunReport(command=args.command).fail(f"type error: {exc}"), EXIT_USAGE
    print(report.to_json() if args.json else render(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
