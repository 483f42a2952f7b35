"""
compare: the feedforward trainers against the multistream-EKF Elman net.
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
from src.services.evaluation import format_comparison
from src.core.errors import DomainError, UsageError
from src.services.pipeline import comparison_configs, load_series, prepare, run_comparison
from src.services.reporting import write_json
from src.utils.file_utils import ensure_directory, write_text_atomic
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "compare", help="compare ff+{backprop,rprop+,irprop+} with elman+ekf",
        description="Train every feedforward trainer and the Elman network on the same "
                    "data; write comparison.json, comparison.txt and each run's artifacts. "
                    "Repeat --data for one comparison per series.")
    add_config_option(parser)
    add_data_options(parser, multiple=True)
    add_preprocess_options(parser)
    add_training_options(parser, with_model=False)
    add_output_option(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    paths = args.data or [None]
    jobs = []
    for path in paths:
        config = build_run_config(args, data=path)
        try:
            comparison_configs(config)
        except DomainError as e:
            raise UsageError(str(e)) from e
        series = load_series(config)
        jobs.append((config, prepare(config, series)))

    labels = [prepared.series.label or f"series{i}" for i, (_, prepared) in enumerate(jobs)]
    if len(set(labels)) != len(labels):
        labels = [f"{i}-{label}" for i, label in enumerate(labels)]

    for (config, prepared), label in zip(jobs, labels):
        out = Path(config.output_dir)
        if len(jobs) > 1:
            out = out / label
        ensure_directory(out)

        runs, report = run_comparison(config, prepared, label)
        for run in runs:
            write_run_artifacts(run, prepared, out / "runs" / run.name)
        write_json(report, out / "comparison.json")
        text = format_comparison(report)
        write_text_atomic(out / "comparison.txt", text)
        print(text)
        if report.flagged:
            logger.warning(f"{label}: {', '.join(report.flagged)} did not reach the target MSE")
    return 0
