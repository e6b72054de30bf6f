"""``ccbox`` command line: check, type, eval and fuzz."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..machine import Answer, OutOfFuel, run
from ..typecheck import TypingError, infer_type
from ..wellformed import Env
from .diagnostics import TYPING_CODES, Diagnostic, ParseError, Severity
from .parser import SourceProgram, parse
from .printer import show_state, show_term, show_type

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


def typing_diagnostic(program: SourceProgram, err: TypingError) -> Diagnostic:
    return Diagnostic(Severity.ERROR, program.span_of(err.path), TYPING_CODES[err.kind], err.detail)


def _load(path: str) -> SourceProgram:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)


class _Usage(Exception):
    pass


def _report(diags, filename: str) -> None:
    for d in diags:
        print(d.render(filename), file=sys.stderr)


def cmd_check(args) -> int:
    program = _load(args.file)
    try:
        infer_type(Env(), program.term)
    except TypingError as err:
        _report([typing_diagnostic(program, err)], args.file)
        return EXIT_ERROR
    print("ok")
    return EXIT_OK


def cmd_type(args) -> int:
    program = _load(args.file)
    try:
        t = infer_type(Env(), program.term)
    except TypingError as err:
        _report([typing_diagnostic(program, err)], args.file)
        return EXIT_ERROR
    print(show_type(t))
    return EXIT_OK


def cmd_eval(args) -> int:
    program = _load(args.file)
    result = run(program.term, fuel=args.fuel, trace=args.trace)
    for n, entry in enumerate(result.trace, 1):
        print(f"step {n} [{entry.rule}] {show_state(entry.state)}")
    if isinstance(result, Answer):
        shown = show_term(result.value)
        if result.var is not None:
            shown = f"{result.var} = {shown}"
        print(f"answer after {result.steps} steps: {shown}")
        return EXIT_OK
    if isinstance(result, OutOfFuel):
        print(f"out of fuel after {result.steps} steps: {show_state(result.state)}")
        return EXIT_ERROR
    print(f"stuck after {result.steps} steps: {result.reason}: {show_state(result.state)}")
    return EXIT_ERROR


def cmd_fuzz(args) -> int:
    from ..testkit.generators import GenConfig
    from ..testkit.properties import run_property_suite, write_failures

    cfg = GenConfig(seed=args.seed, count=args.count)
    report = run_property_suite(cfg, only=args.only)
    print(report.render())
    if not report.ok:
        written = write_failures(report, Path(args.out))
        for p in written:
            print(f"counterexample written to {p}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ccbox", description="Box calculus checker and abstract machine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and type-check a program")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("type", help="print the inferred type of a program")
    p.add_argument("file")
    p.set_defaults(func=cmd_type)

    p = sub.add_parser("eval", help="run a program on the abstract machine")
    p.add_argument("file")
    p.add_argument("--fuel", type=int, default=10_000)
    p.add_argument("--trace", action="store_true", help="print every step")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("fuzz", help="run the property suite on generated cases")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--only", action="append", metavar="PROPERTY", help="restrict to named properties")
    p.add_argument("--out", default="fuzz-failures", help="directory for counterexamples")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as err:
        _report(err.diagnostics, getattr(args, "file", "<input>"))
        return EXIT_USAGE
    except _Usage as err:
        print(f"ccbox: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
