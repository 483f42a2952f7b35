"""
Files written for a trained run.
"""
from pathlib import Path

from src.models.evaluation import RunSummary
from src.models.run_config import CheckpointMetadata, ModelKind
from src.services.checkpoint import save_checkpoint
from src.services.pipeline import TrainedRun
from src.services.preprocess import PreparedData
from src.services.reporting import PlotKind, emit_plot_csv, write_json, write_training_report_csv
from src.utils.file_utils import ensure_directory, get_file_hash

CHECKPOINT_FILE = "checkpoint.json"
ERROR_CURVE_FILE = "error_curve.csv"
REPORT_FILE = "report.json"
FORECAST_FILE = "forecast_vs_actual.csv"


def run_metadata(run: TrainedRun) -> CheckpointMetadata:
    config = run.config
    return CheckpointMetadata(
        seed=config.seed,
        config_hash=config.config_hash(),
        algorithm=run.report.algorithm.value,
        stream_length=config.stream_length if config.model == ModelKind.ELMAN else None,
        data_sha256=get_file_hash(config.data) if config.data else None,
    )


def write_run_artifacts(run: TrainedRun, prepared: PreparedData, out: Path) -> None:
    """checkpoint.json, error_curve.csv, report.json and forecast_vs_actual.csv."""
    ensure_directory(out)
    save_checkpoint(run.model, prepared.params, out / CHECKPOINT_FILE, run_metadata(run))
    write_training_report_csv(run.report, out / ERROR_CURVE_FILE)
    write_json(RunSummary(
        name=run.name,
        config_hash=run.config.config_hash(),
        report=run.report,
        metrics=run.metrics,
        diagnostics=run.diagnostics,
        config=run.config.model_dump(mode="json"),
    ), out / REPORT_FILE)
    emit_plot_csv(PlotKind.FORECAST_VS_ACTUAL, (run.actual_rates, run.forecasts), out / FORECAST_FILE)
