"""Command line front end: ``agd check``, ``agd export``, ``agd conventions``.

Exit codes: 0 when every selected check passes or is skipped, 1 when a check
fails (or an export cannot be verified), 2 when the model cannot be loaded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .conventions import CONVENTIONS, markdown
from .dsl import DSLError, load_model
from .report import VerificationError
from .runner import export_extension, run
from .symexpr import ExprError

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_LOAD = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="agd", description="Exact checks for Lie algebroid adjustments.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run the tasks of a model file")
    c.add_argument("file")
    c.add_argument("--task", default="*", metavar="GLOB", help="only run tasks whose name matches")
    c.add_argument("--format", choices=("text", "json"), default="text")

    e = sub.add_parser("export", help="write a built extension as a model file")
    e.add_argument("file")
    e.add_argument("--extension", required=True, metavar="NAME", help="extension, mackenzie or pullback task")
    e.add_argument("-o", "--output", required=True, metavar="OUT")

    v = sub.add_parser("conventions", help="print the sign and index conventions")
    v.add_argument("--markdown", action="store_true", help="wrap the sheet as the docs page")
    return p


def _load(path, err):
    try:
        return load_model(path)
    except (DSLError, ExprError) as e:
        print(f"error: {e}", file=err)
        return None


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)

    if args.command == "conventions":
        out.write(markdown() if args.markdown else CONVENTIONS)
        return EXIT_OK

    model = _load(args.file, err)
    if model is None:
        return EXIT_LOAD

    if args.command == "check":
        report = run(model, args.task)
        if args.format == "json":
            json.dump(report.to_dict(), out, indent=2)
            out.write("\n")
            for w in report.warnings:
                print(f"warning: {w}", file=err)
        else:
            print(report.format(), file=out)
        return report.exit_code

    try:
        export_extension(model, args.extension, args.output)
    except KeyError as e:
        print(f"error: {e.args[0]}", file=err)
        return EXIT_FAIL
    except VerificationError as e:
        print(f"error: {e}", file=err)
        if e.report is not None:
            print(e.report.format(), file=err)
        return EXIT_FAIL
    except OSError as e:
        print(f"error: cannot write {args.output}: {e.strerror}", file=err)
        return EXIT_FAIL
    print(f"wrote {args.output}", file=out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
