"""
End-to-end orchestration: series -> prepared data -> trained model -> scores.
"""
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from config.settings import settings
from src.core.errors import DomainError, ShapeError
from src.models.base import build
from src.models.evaluation import ComparisonReport, ForecastDiagnostics, Metrics, ModelEntry
from src.models.network import ElmanNetwork, HiddenState, MlpNetwork
from src.models.run_config import ModelKind, RunConfig, SyntheticSpec
from src.models.series import NormalizationParams, RateSeries
from src.models.training import Algorithm, TrainingReport
from src.services.data_io import generate_synthetic, read_rate_series
from src.services.ekf import train_elman_multistream
from src.services.elman import elman_final_state, init_elman
from src.services.evaluation import (
    compare_models,
    forecast_rates,
    one_step_forecast,
    score_elman,
    score_mlp,
)
from src.services.mlp import init_weights
from src.services.preprocess import (
    PreparedData,
    log_returns,
    make_windows,
    normalize,
    prepare_dataset,
)
from src.services.rprop import train_feedforward
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

Model = Union[MlpNetwork, ElmanNetwork]

COMPARISON_RUNS = (
    ("ff-backprop", ModelKind.FF, Algorithm.BACKPROP),
    ("ff-rprop+", ModelKind.FF, Algorithm.RPROP_PLUS),
    ("ff-irprop+", ModelKind.FF, Algorithm.IRPROP_PLUS),
    ("elman-ekf", ModelKind.ELMAN, Algorithm.EKF),
)


class TrainedRun(BaseModel):
    """A trained model with its report and held-out scores."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    config: RunConfig
    model: Model
    report: TrainingReport
    predictions: np.ndarray
    metrics: Metrics
    forecasts: np.ndarray
    actual_rates: np.ndarray
    diagnostics: ForecastDiagnostics


def load_series(config: RunConfig) -> RateSeries:
    """Rate series named by a run configuration (file or synthetic)."""
    if config.data:
        return read_rate_series(config.data, config.label)
    spec = config.synthetic
    if spec is None:
        spec = SyntheticSpec()
    series = generate_synthetic(spec.kind, spec.n, spec.seed, spec.params)
    if config.label:
        series = series.model_copy(update={"label": config.label})
    return series


def prepare(config: RunConfig, series: RateSeries) -> PreparedData:
    return prepare_dataset(series, config.return_mode, config.window,
                           config.split_ratio, config.fit_on)


def elman_warmup_rows(prepared: PreparedData, stream_length: int) -> np.ndarray:
    """Training rows inside the last ``stream_length`` training points."""
    k = max(0, min(stream_length - prepared.window, len(prepared.train)))
    return prepared.train.inputs[len(prepared.train) - k:]


def _unscorable(n: int) -> Metrics:
    inf = float("inf")
    return Metrics(mse=inf, rmse=inf, mae=inf, directional_accuracy=0.0, n=n)


def train_model(config: RunConfig, prepared: PreparedData, name: Optional[str] = None) -> TrainedRun:
    """Initialize, train and score the model a configuration describes."""
    if config.model == ModelKind.ELMAN:
        net = init_elman(config.layer_sizes, config.seed, config.init_scale)
        model, report = train_elman_multistream(net, prepared.train_values, config.multistream())
    else:
        net = init_weights(config.layer_sizes, config.seed, config.init_scale)
        model, report = train_feedforward(net, prepared.train, config.trainer, config.stop(),
                                          config.learning_rate, config.rprop)

    diagnostics = ForecastDiagnostics()
    with np.errstate(over="ignore", invalid="ignore"):
        try:
            if isinstance(model, ElmanNetwork):
                warmup = elman_warmup_rows(prepared, config.stream_length)
                predictions, metrics = score_elman(model, warmup, prepared.test, prepared.params)
            else:
                predictions, metrics = score_mlp(model, prepared.test, prepared.params)
            forecasts = forecast_rates(predictions, prepared.test_last_rates(),
                                       prepared.params, diagnostics)
        except ShapeError as e:
            logger.warning(f"cannot score {name or config.trainer.value}: {e}")
            predictions = np.full(len(prepared.test), np.nan)
            metrics = _unscorable(len(prepared.test))
            forecasts = np.full(len(prepared.test), np.nan)

    if diagnostics.clamp_events:
        logger.warning(f"{diagnostics.clamp_events} of {diagnostics.forecasts} forecasts "
                       f"were clamped into the normalized range")
    return TrainedRun(
        name=name or f"{config.model.value}-{config.trainer.value}",
        config=config,
        model=model,
        report=report,
        predictions=predictions,
        metrics=metrics,
        forecasts=forecasts,
        actual_rates=prepared.test_actual_rates(),
        diagnostics=diagnostics,
    )


def comparison_configs(base: RunConfig) -> List[Tuple[str, RunConfig]]:
    """The feedforward trainers and the multistream-EKF Elman net on one configuration."""
    payload = base.model_dump(exclude={"model", "trainer", "hidden"})
    return [(name, build(RunConfig, **payload, model=kind, trainer=algorithm))
            for name, kind, algorithm in COMPARISON_RUNS]


def run_comparison(base: RunConfig, prepared: PreparedData,
                   label: str = "") -> Tuple[List[TrainedRun], ComparisonReport]:
    runs = [train_model(config, prepared, name) for name, config in comparison_configs(base)]
    entries = [ModelEntry(name=r.name, report=r.report, metrics=r.metrics) for r in runs]
    return runs, compare_models(entries, label or prepared.series.label)


def forecast_next(model: Model, params: NormalizationParams, series: RateSeries,
                  stream_length: Optional[int] = None) -> float:
    """Next rate after the end of ``series``.

    The feedforward net sees only the last window. The Elman net first runs over
    the windows inside the last ``stream_length`` points so its hidden state carries
    the recent context it was trained with.
    """
    window = model.layer_sizes[0]
    returns = log_returns(series, params.mode)
    if len(returns) < window:
        raise DomainError(f"{len(returns)} returns cannot fill a window of {window}")
    normalized = normalize(returns, params)
    last_window = normalized.values[-window:]
    last_rate = float(series.rates[-1])

    state = None
    if isinstance(model, ElmanNetwork):
        state = HiddenState.zeros(model.layer_sizes[1])
        if len(returns) > window:
            rows = make_windows(normalized, window).inputs
            k = max(0, (stream_length or settings.stream_length) - window)
            if k:
                state = elman_final_state(model, rows[-k:], state)
    diagnostics = ForecastDiagnostics()
    rate = one_step_forecast(model, last_window, params, last_rate, state, diagnostics)
    if diagnostics.clamp_events:
        logger.warning("forecast output was clamped into the normalized range")
    return rate
