#!/usr/bin/env python3
"""
Twistlab Runner

Entry point for the verification suites and the artifact dumps:

    python run.py verify <suite> [--order N] [--rep fundamental|spin:j]
                         [--set h=<rational>] [--set g=<rational>]
                         [--format json|text] [--budget steps=K,len=L]
    python run.py dump <selector> [same flags]
"""

import argparse
import logging
import os
import sys

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logging.basicConfig(level=os.environ.get("TWISTLAB_LOG_LEVEL", "INFO").upper(),
                    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

from src.cli import DUMP_SELECTORS, dump, render, run_suite  # noqa: E402
from src.config import SUITES, SuiteConfig, parse_assignments, parse_budget  # noqa: E402
from src.errors import UsageError  # noqa: E402
from src.reports.report import EXIT_FAIL, EXIT_USAGE  # noqa: E402


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting with status 2."""

    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = UsageParser(prog="twistlab", description="Exact verification of the two-parametric twist")
    commands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, help="truncation order N for rank-2 checks")
    common.add_argument("--rep", help="fundamental or spin:j")
    common.add_argument("--set", action="append", dest="assignments", metavar="PARAM=VALUE",
                        help="fix h or g to an exact rational")
    common.add_argument("--format", dest="output_format", choices=("text", "json"))
    common.add_argument("--budget", help="rewrite budget, e.g. steps=100000,len=8")

    verify = commands.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("suite", help=" | ".join(SUITES + ("all",)))
    selector = commands.add_parser("dump", parents=[common], help="print an artifact")
    selector.add_argument("selector", help=" | ".join(DUMP_SELECTORS))
    return parser


def make_config(args, suite="all"):
    """Environment defaults overridden by the parsed flags."""
    values = parse_assignments(args.assignments)
    budget = parse_budget(args.budget) if args.budget else {}
    return SuiteConfig.from_env(
        suite,
        order=args.order,
        rep=args.rep,
        output_format=args.output_format,
        h_value=values.get("h"),
        g_value=values.get("g"),
        **budget,
    )


def main(argv=None):
    """Run the command line; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify":
            config = make_config(args, args.suite)
            report = run_suite(config)
            print(render(report, config.output_format))
            return report.exit_code
        config = make_config(args)
        print(dump(args.selector, config))
        return 0
    except UsageError as e:
        print(f"Usage error: {e}", file=sys.stderr)
        build_parser().print_usage(sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\nRun terminated by user")
        sys.exit(EXIT_FAIL)
    except Exception as e:
        logger.exception("Unexpected error")
        print(f"Error: {e}")
        sys.exit(EXIT_FAIL)
