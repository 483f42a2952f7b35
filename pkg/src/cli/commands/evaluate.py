"""
evaluate: score a saved checkpoint on the test rows of a series.
"""
import argparse
from pathlib import Path

from src.cli.options import add_data_options, add_output_option, build_run_config
from src.models.network import ElmanNetwork
from src.models.evaluation import ForecastDiagnostics
from src.services.checkpoint import read_checkpoint, restore
from src.services.evaluation import forecast_rates, score_elman, score_mlp
from src.services.pipeline import elman_warmup_rows, load_series
from src.services.preprocess import prepare_dataset
from src.services.reporting import PlotKind, emit_plot_csv, write_json
from src.utils.file_utils import ensure_directory
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "evaluate", help="score a checkpoint on held-out data",
        description="Load a checkpoint and a series, score the test rows with the "
                    "stored normalizer and write metrics.json and forecast_vs_actual.csv.")
    parser.add_argument("--checkpoint", required=True, help="checkpoint.json from train")
    add_data_options(parser)
    parser.add_argument("--split", dest="split_ratio", type=float,
                        help="fraction of rows treated as training (default: settings)")
    add_output_option(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    checkpoint = read_checkpoint(args.checkpoint)
    model, params = restore(checkpoint)
    window = checkpoint.layer_sizes[0]
    config = build_run_config(args, window=window, return_mode=params.mode.value)

    prepared = prepare_dataset(load_series(config), params.mode, window,
                               config.split_ratio, params=params)
    if isinstance(model, ElmanNetwork):
        stream_length = checkpoint.metadata.stream_length or config.stream_length
        warmup = elman_warmup_rows(prepared, stream_length)
        predictions, metrics = score_elman(model, warmup, prepared.test, params)
    else:
        predictions, metrics = score_mlp(model, prepared.test, params)
    diagnostics = ForecastDiagnostics()
    forecasts = forecast_rates(predictions, prepared.test_last_rates(), params, diagnostics)

    out = Path(config.output_dir)
    ensure_directory(out)
    write_json(metrics, out / "metrics.json")
    emit_plot_csv(PlotKind.FORECAST_VS_ACTUAL, (prepared.test_actual_rates(), forecasts),
                  out / "forecast_vs_actual.csv")
    if diagnostics.clamp_events:
        logger.warning(f"{diagnostics.clamp_events} test forecasts were clamped")

    print(f"test mse {metrics.mse:.6e}  rmse {metrics.rmse:.6e}  mae {metrics.mae:.6e}  "
          f"directional accuracy {metrics.directional_accuracy:.3f}  (n={metrics.n})")
    return 0
