"""Command-line front end.

Exit codes are a stable contract: 0 on success, 1 when the input was read
but rejected (parse, type, wiring or law failures), 2 on IO and usage
errors.  `check-eq` treats any completed comparison as success and prints
the verdict — equal, not-equal or not-comparable — on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import lang
from .errors import ImpCircError
from .laws import standard_suites
from .normalform import factorize
from .render import term_to_dot, write_report
from .semantics import NotComparable, equal, equal_up_to_regrading, evaluate
from .terms import format_term, identity_term, infer_profile, knights, par, parse_term

OK, DIAGNOSTIC, USAGE = 0, 1, 2


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(USAGE)


def _write(path: str, text: str):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(USAGE)


def cmd_run(args) -> int:
    result = lang.run(_read(args.file))
    if args.format == "json":
        print(json.dumps(lang.run_result_json(result), sort_keys=True))
    else:
        print(lang.format_run_result(result))
    return OK


def cmd_typecheck(args) -> int:
    te = lang.typecheck(lang.parse_program(_read(args.file)))
    print(f"type: {te.type}")
    print(f"grade: {te.grade}")
    return OK


def cmd_check_eq(args) -> int:
    s = parse_term(_read(args.left))
    t = parse_term(_read(args.right))
    try:
        if args.up_to_regrading:
            witness = equal_up_to_regrading(s, t)
            if witness is None:
                print("not-equal")
            else:
                print(f"equal-up-to-regrading: {witness}")
        else:
            print("equal" if equal(s, t) else "not-equal")
    except NotComparable as exc:
        print(f"not-comparable: {exc}")
    return OK


def cmd_normalize(args) -> int:
    term = parse_term(_read(args.file))
    fact = factorize(term)
    arity = infer_profile(fact.zero_part).arity - fact.grade
    print(format_term(par(identity_term(arity), knights(fact.grade))))
    print(format_term(fact.zero_part))
    return OK


def cmd_verify_laws(args) -> int:
    if args.size == 0:
        print("no instances requested; vacuously OK")
        return OK
    reports = standard_suites(args.seed, args.size, args.wires, args.grade)
    bad = False
    for report in reports:
        print(report)
        if not report.passed:
            bad = True
            for failure in report.failures[:3]:
                print(f"    instance: {failure}")
    if bad:
        print("law verification FAILED")
        return DIAGNOSTIC
    print("all laws hold")
    return OK


def cmd_render(args) -> int:
    source = _read(args.file)
    if args.file.endswith(".imp"):
        _, term = lang.compile_program(source)
    else:
        term = parse_term(source)
    _write(args.output, term_to_dot(term))
    print(args.output)
    return OK


def cmd_report(args) -> int:
    result = lang.run(_read(args.file))
    stem = Path(args.file).stem
    try:
        paths = write_report(result, Path(args.output), stem)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    for p in paths:
        print(p)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impcirc",
        description="evaluate and compare graded probabilistic circuit diagrams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a program and print its branches")
    p.add_argument("file")
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("typecheck", help="print a program's type and grade")
    p.add_argument("file")
    p.set_defaults(func=cmd_typecheck)

    p = sub.add_parser("check-eq", help="decide equality of two term files")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--up-to-regrading", action="store_true")
    p.set_defaults(func=cmd_check_eq)

    p = sub.add_parser("normalize", help="print a term's knight-first factorization")
    p.add_argument("file")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("verify-laws", help="run the randomized law suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=50, help="instances per law; 0 skips")
    p.add_argument("--wires", type=int, default=6)
    p.add_argument("--grade", type=int, default=3)
    p.set_defaults(func=cmd_verify_laws)

    p = sub.add_parser("render", help="write a DOT drawing of a term or program")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("report", help="write CSV and figure files for a program run")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ImpCircError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DIAGNOSTIC


if __name__ == "__main__":
    sys.exit(main())
