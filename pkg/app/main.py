"""
Main entry point for the Schinzel Lab command line.

JSON reports go to stdout (or --output); logs go to stderr.
Exit codes: 0 completed, 1 usage error, 2 bound exceeded, 3 invariant violation.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from app.config import get_settings
from app.constants import (
    APP_DESCRIPTION,
    APP_NAME,
    APP_VERSION,
    EXIT_OK,
    EXIT_USAGE,
)
from app.router import CommandRouter
from modules.nielsen import Equivalence
from services.report_service import build_envelope, write_report
from utils.exceptions import SchinzelLabException, handle_exception
from utils.logger import search_trail, set_level, setup_logger

logger = setup_logger(__name__)


class UsageError(Exception):
    """argparse rejected the command line."""


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", type=Path, default=None, help="Write the JSON report to this file")
    common.add_argument("--order-bound", type=int, default=None, help="Override SCHINZEL_ORDER_BOUND")
    common.add_argument("--no-cache", action="store_true", help="Recompute instead of reusing cached verdicts")
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--json", action="store_true", help="Accepted for compatibility; output is always JSON")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    search_defaults = get_settings().search
    parser = CliArgumentParser(prog="schinzel", description=f"{APP_NAME}: {APP_DESCRIPTION}")
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliArgumentParser)

    p = sub.add_parser("dihedral", parents=[common], help="Chebyshev / dihedral dossier for even n")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("nielsen", parents=[common], help="Enumerate a Nielsen class")
    p.add_argument("--group", type=Path, required=True, help="JSON {degree, generators}")
    p.add_argument("--classes", nargs="+", required=True, help="Class labels or cycle strings of members")
    p.add_argument("--equivalence", choices=[e.value for e in Equivalence], default="abs")
    p.add_argument("--ordered", action="store_true", help="Keep the classes in the given slot order")

    p = sub.add_parser("schinzel", parents=[common], help="Criterion and verdicts for (f, zeta_v f)")
    p.add_argument("--tuple", type=Path, required=True, help="JSON {degree, entries, infinity_slot}")
    p.add_argument("--gamma", type=Path, required=True, help="JSON {images} or {generators, generator_images}")
    p.add_argument("--v", type=int, default=2)

    p = sub.add_parser("compbranch", parents=[common], help="Branch cycles of mu o f for mu(z) = z^v")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v", type=int, default=2)

    p = sub.add_parser("search", parents=[common], help="Search for Schinzel pair candidates")
    p.add_argument("--max-n", type=int, default=search_defaults.max_degree)
    p.add_argument("--min-n", type=int, default=2)
    p.add_argument("--v", type=int, default=2)
    p.add_argument("--jobs", type=int, default=search_defaults.jobs)
    p.add_argument("--csv", type=Path, default=None, help="Also write a CSV summary table")

    p = sub.add_parser("classify", parents=[common], help="Classify classes with <sigma_inf> normal")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v", type=int, default=2)

    p = sub.add_parser("conjecture", parents=[common], help="Evidence that D_4 gives the only pair")
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--v", type=int, default=2)
    p.add_argument("--jobs", type=int, default=search_defaults.jobs)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse, route, print. Returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if args.log_level:
        set_level(args.log_level)
    elif get_settings().debug:
        set_level("DEBUG")

    router = CommandRouter()
    try:
        result = router.run(args.command, args)
    except SchinzelLabException as e:
        search_trail.log_error(args.command, e)
        print(json.dumps(handle_exception(e), sort_keys=True), file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        # pydantic validation of the search configuration
        print(json.dumps(handle_exception(e), sort_keys=True), file=sys.stderr)
        return EXIT_USAGE

    write_report(build_envelope(args.command, result), path=args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
