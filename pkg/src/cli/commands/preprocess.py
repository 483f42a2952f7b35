"""
preprocess: returns, normalization and supervised windows for one series.
"""
import argparse
from pathlib import Path

from src.cli.options import (
    add_config_option,
    add_data_options,
    add_output_option,
    add_preprocess_options,
    build_run_config,
)
from src.services.pipeline import load_series, prepare
from src.services.reporting import (
    PlotKind,
    emit_plot_csv,
    write_dated_values,
    write_json,
    write_supervised_csv,
)
from src.utils.file_utils import ensure_directory
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "preprocess", help="normalize a series and write plot-ready CSVs",
        description="Write raw, return and normalized series, normalization "
                    "parameters and the train/test supervised sets.")
    add_config_option(parser)
    add_data_options(parser)
    add_preprocess_options(parser)
    add_output_option(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    config = build_run_config(args)
    series = load_series(config)
    prepared = prepare(config, series)

    out = Path(config.output_dir)
    ensure_directory(out)
    return_dates = series.dates[1:]
    emit_plot_csv(PlotKind.RAW_SERIES, series, out / "raw_series.csv")
    write_dated_values(return_dates, prepared.returns, "return", out / "returns.csv")
    emit_plot_csv(PlotKind.NORMALIZED_SERIES, (return_dates, prepared.normalized),
                  out / "normalized_series.csv")
    write_json(prepared.params, out / "params.json")
    write_supervised_csv(prepared.train, out / "train.csv")
    write_supervised_csv(prepared.test, out / "test.csv")

    logger.info(f"Preprocessed {len(series)} rates into {out}")
    print(out)
    return 0
