"""
Command-line front end.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure.
"""
import argparse
import sys
from typing import List, Optional

from config.settings import settings
from src.cli.commands import compare, evaluate, forecast, preprocess, synth, train
from src.core.errors import ForecastError, UsageError
from src.utils.logger import set_level, setup_logger

logger = setup_logger(__name__)

COMMANDS = (synth, preprocess, train, evaluate, forecast, compare)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fxnn",
        description="Neural exchange-rate forecasting: feedforward networks trained with "
                    "backprop/RPROP+/iRPROP+ and Elman networks trained with multistream EKF.")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        type=str.upper, help=f"logging level (default: {settings.log_level})")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def run_cli(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv`` and dispatch to a subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage and 0 for --help
        return e.code if isinstance(e.code, int) else 2

    if args.log_level:
        set_level(args.log_level)
    if not getattr(args, "handler", None):
        parser.print_usage(sys.stderr)
        return UsageError.exit_code

    try:
        return args.handler(args)
    except UsageError as e:
        logger.error(f"{args.command}: {e}")
        parser.print_usage(sys.stderr)
        return e.exit_code
    except ForecastError as e:
        logger.error(f"{args.command}: {e}")
        return e.exit_code


def main() -> None:
    sys.exit(run_cli())
