"""
forecast: next rate after the end of a series.
"""
import argparse

from src.cli.options import add_data_options, build_run_config
from src.models.evaluation import ForecastResult
from src.services.checkpoint import read_checkpoint, restore
from src.services.pipeline import forecast_next, load_series
from src.services.reporting import write_json
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "forecast", help="forecast the next rate",
        description="Print the one-step-ahead rate for the end of a series.")
    parser.add_argument("--checkpoint", required=True, help="checkpoint.json from train")
    add_data_options(parser)
    parser.add_argument("--out", dest="forecast_out", help="also write the forecast as JSON")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    checkpoint = read_checkpoint(args.checkpoint)
    model, params = restore(checkpoint)
    config = build_run_config(args, window=checkpoint.layer_sizes[0],
                              return_mode=params.mode.value)
    series = load_series(config)

    rate = forecast_next(model, params, series, checkpoint.metadata.stream_length)
    logger.info(f"Forecast after {series.dates[-1]}: {rate!r}")
    if args.forecast_out:
        write_json(ForecastResult(rate=rate, last_date=series.dates[-1].isoformat(),
                                  model_kind=checkpoint.model_kind.value),
                   args.forecast_out)
    print(format(rate, ".17g"))
    return 0
