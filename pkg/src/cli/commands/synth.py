"""
synth: write a deterministic synthetic rate series.
"""
import argparse

from src.cli.options import parse_params
from src.core.errors import UsageError
from src.services.data_io import SYNTHETIC_DEFAULTS, generate_synthetic, save_rate_series
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "synth", help="generate a synthetic rate series",
        description="Write a seeded synthetic date,rate CSV.")
    parser.add_argument("--kind", required=True, choices=sorted(SYNTHETIC_DEFAULTS))
    parser.add_argument("--n", type=int, default=2100, help="number of rates (default: 2100)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--param", action="append", metavar="KEY=VALUE",
                        help="override a generator parameter")
    parser.add_argument("--out", required=True, help="CSV file to write")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    if args.n < 2:
        raise UsageError(f"--n must be at least 2, got {args.n}")
    series = generate_synthetic(args.kind, args.n, args.seed, parse_params(args.param))
    save_rate_series(series, args.out)
    logger.info(f"Wrote {len(series)} {args.kind} rates to {args.out}")
    print(args.out)
    return 0
