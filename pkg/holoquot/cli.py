"""Command-line entry point: ``holoquot list|export|eval|run``.

Exit status is 0 when every gating check passes, 1 when one fails and 2 for
usage, catalog or parse errors. Reports go to stdout or ``--report``;
diagnostics go to stderr.
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from dotenv import load_dotenv
from pydantic import ValidationError

from .claims import SUITES
from .config import MODES, Settings, settings
from .errors import CatalogError, EvaluationError, ParseError, StructuralError
from .log import configure_logging
from .verifier import VerificationService

load_dotenv()

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

USAGE_ERRORS = (CatalogError, ParseError)
# a --point naming an unknown generator or leaving one unassigned
EVAL_USAGE_ERRORS = USAGE_ERRORS + (StructuralError, EvaluationError)


def _point(text: str) -> Dict[str, float]:
    values = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, raw = part.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected name=value, got {part!r}")
        try:
            values[name.strip()] = float(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {raw!r}") from None
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holoquot",
        description="Exterior calculus and torsion checks for circle quotients of Spin(7)-structures.",
    )
    parser.add_argument("--log-level", default=None, help="override HOLOQUOT_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list the catalog entries")

    export = sub.add_parser("export", help="write a frame algebra as JSON")
    export.add_argument("target", help="catalog id or JSON file")
    export.add_argument("-o", "--output", default=None, help="output file (default: stdout)")

    ev = sub.add_parser("eval", help="evaluate 'scal' or a prefix expression at a point")
    ev.add_argument("expression")
    ev.add_argument("target", help="catalog id or JSON file")
    ev.add_argument("--point", type=_point, default=None, help="name=value,... (default: first sample point)")
    ev.add_argument("--seed", type=int, default=None)

    run = sub.add_parser("run", help="run a suite of checks")
    run.add_argument("target", help="catalog id or JSON file")
    run.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)} or all")
    run.add_argument("--tol", type=float, default=None)
    run.add_argument("--points", type=int, default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--mode", choices=MODES, default=None)
    run.add_argument("--workers", type=int, default=None)
    run.add_argument("--report", default=None, help="write the JSON report here instead of stdout")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    names = ("tol", "points", "seed", "mode", "workers", "log_level")
    updates = {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}
    if getattr(args, "report", None):
        updates["report_path"] = args.report
    return updates


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _exit_code(result: Dict[str, object], usage: Tuple[type, ...] = USAGE_ERRORS) -> int:
    error = result.get("error")
    if error is None:
        return EXIT_OK if result["success"] else EXIT_FAILED
    print(f"holoquot: {result['message']}", file=sys.stderr)
    return EXIT_USAGE if isinstance(error, usage) else EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        # model_copy would skip validation
        run_settings = Settings(**{**settings.model_dump(), **_overrides(args)})
    except ValidationError as exc:
        print(f"holoquot: {exc.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(run_settings.log_level)
    service = VerificationService(run_settings)

    try:
        if args.command == "list":
            listing = service.list_entries()["listing"]
            for item in listing.entries:
                sys.stdout.write(f"{item.id}\t{item.description}\n")
            return EXIT_OK

        if args.command == "export":
            result = service.export_entry(args.target)
            if result["success"]:
                _emit(result["text"], args.output)
            return _exit_code(result)

        if args.command == "eval":
            result = service.evaluate(args.expression, args.target, args.point)
            if result["success"]:
                sys.stdout.write(result["result"].model_dump_json(indent=2) + "\n")
            return _exit_code(result, EVAL_USAGE_ERRORS)

        result = service.run_suite(args.suite, args.target, run_settings)
        if "report" not in result:
            return _exit_code(result)
        report = result["report"]
        _emit(report.to_json(), run_settings.report_path)
        print(f"{'✅' if report.passed else '❌'} {report.target} [{report.suite}]: {result['message']}", file=sys.stderr)
        return _exit_code(result)

    except OSError as exc:
        print(f"holoquot: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
