"""
train: fit one model and write its checkpoint, error curve and test forecasts.
"""
import argparse
from pathlib import Path

from src.cli.artifacts import write_run_artifacts
from src.cli.options import (
    add_config_option,
    add_data_options,
    add_output_option,
    add_preprocess_options,
    add_training_options,
    build_run_config,
)
from src.models.training import StopReason
from src.services.pipeline import load_series, prepare, train_model
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "train", help="train a feedforward or Elman network",
        description="Train one model; writes checkpoint.json, error_curve.csv, "
                    "report.json and forecast_vs_actual.csv.")
    add_config_option(parser)
    add_data_options(parser)
    add_preprocess_options(parser)
    add_training_options(parser)
    add_output_option(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    config = build_run_config(args)
    prepared = prepare(config, load_series(config))
    run = train_model(config, prepared)

    out = Path(config.output_dir)
    write_run_artifacts(run, prepared, out)

    report = run.report
    print(f"{run.name}: {report.stop_reason.value} after {report.epochs_run} epochs, "
          f"train mse {report.final_mse:.6e}, test mse {run.metrics.mse:.6e}")
    print(out)
    if report.stop_reason == StopReason.DIVERGED:
        logger.error(f"{run.name} diverged; artifacts hold the last finite weights")
        return 4
    return 0
