"""Command-line front end: ``opcalc run <script>`` and ``opcalc check <suite>``.

Exit codes: 0 success, 1 a falsified verdict or failed check, 2 any error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .errors import OpcalcError
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FALSIFIED, EXIT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opcalc", description="Exact right-inverse calculus on truncated spaces.")
    p.add_argument("--version", action="version", version=f"opcalc {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="evaluate a script")
    run.add_argument("script", type=Path)
    run.add_argument("--json", action="store_true", help="emit the structured JSON report")
    run.add_argument("--seed", type=_nonneg, default=None,
                     help="sampling seed (default: $OPCALC_SEED or 0)")
    run.add_argument("--grade", default=None, help="working grade, e.g. 8 or 6x6")
    run.add_argument("--nmax", type=_nonneg, default=3, help="degree range for effectivity checks")
    run.add_argument("--samples", type=_nonneg, default=50, help="random samples per effectivity cell")

    check = sub.add_parser("check", help="run a built-in check suite")
    check.add_argument("suite", choices=["all", *SUITES])
    check.add_argument("--seed", type=_nonneg, default=None)
    return p


def _seed(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("OPCALC_SEED")
    if env is None:
        return 0
    try:
        return _nonneg(env)
    except (ValueError, argparse.ArgumentTypeError):
        raise OpcalcError(f"OPCALC_SEED must be a nonnegative integer, got {env!r}") from None


def _run(args) -> int:
    from .dsl.evaluator import parse_grade, run_script

    text = args.script.read_text(encoding="utf-8")
    grade = parse_grade(args.grade) if args.grade else None
    report = run_script(text, seed=_seed(args.seed), grade=grade, nmax=args.nmax, samples=args.samples)
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return EXIT_FALSIFIED if report.falsified else EXIT_OK


def _check(args) -> int:
    results = run_suite(args.suite, seed=_seed(args.seed))
    for r in results:
        line = f"{'PASS' if r.passed else 'FAIL'}  {r.name}"
        print(line + (f"  ({r.detail})" if r.detail else ""))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FALSIFIED


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args) if args.command == "run" else _check(args)
    except OpcalcError as exc:
        print(f"opcalc: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"opcalc: {exc}", file=sys.stderr)
        return EXIT_ERROR
