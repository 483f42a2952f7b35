"""
Scoring on held-out data, rate-space forecasts and run comparison.
"""
import itertools
import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import settings
from src.core.errors import DomainError, ShapeError
from src.models.evaluation import (
    ComparisonReport,
    ComparisonRow,
    ForecastDiagnostics,
    Metrics,
    ModelEntry,
    PairRatio,
)
from src.models.network import ElmanNetwork, HiddenState, MlpNetwork
from src.models.series import NormalizationParams, SupervisedSet
from src.models.training import Algorithm
from src.services.elman import elman_final_state, elman_run, elman_step
from src.services.mlp import mlp_forward, mlp_predict
from src.services.preprocess import inverse_logistic, invert_returns
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

Model = Union[MlpNetwork, ElmanNetwork]


def evaluate_forecasts(predicted, actual, params: NormalizationParams) -> Metrics:
    """MSE/RMSE/MAE in normalized space; directional accuracy on denormalized returns.

    The logistic map is decreasing, so signs are compared only after both
    sequences are mapped back to returns. sign(0) matches only sign(0).
    """
    p = np.asarray(predicted, dtype=np.float64).ravel()
    a = np.asarray(actual, dtype=np.float64).ravel()
    if p.shape != a.shape or p.shape[0] == 0:
        raise ShapeError(f"predicted {p.shape} and actual {a.shape} must be equal and non-empty")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(a))):
        raise ShapeError("forecasts must be finite")

    err = p - a
    mse = float(np.mean(err ** 2))
    eps = settings.clamp_epsilon
    p_returns = inverse_logistic(np.clip(p, eps, 1.0 - eps), params)
    a_returns = inverse_logistic(a, params)
    hits = np.sign(p_returns) == np.sign(a_returns)
    return Metrics(
        mse=mse,
        rmse=math.sqrt(mse),
        mae=float(np.mean(np.abs(err))),
        directional_accuracy=float(np.mean(hits)),
        n=p.shape[0],
    )


def clamp_output(y: float, epsilon: float, diagnostics: Optional[ForecastDiagnostics] = None) -> float:
    """Pin a raw network output into [epsilon, 1 - epsilon]."""
    clamped = min(max(y, epsilon), 1.0 - epsilon)
    if diagnostics is not None:
        diagnostics.forecasts += 1
        if clamped != y:
            diagnostics.clamp_events += 1
    if clamped != y:
        logger.debug(f"clamped raw output {y!r} to {clamped!r}")
    return clamped


def one_step_forecast(model: Model, window, params: NormalizationParams, last_rate: float,
                      state: Optional[HiddenState] = None,
                      diagnostics: Optional[ForecastDiagnostics] = None,
                      epsilon: Optional[float] = None) -> float:
    """Next rate from the last normalized window: forward -> clamp -> denormalize -> invert."""
    epsilon = settings.clamp_epsilon if epsilon is None else epsilon
    x = np.asarray(window, dtype=np.float64)
    n_in = model.layer_sizes[0]
    if x.shape != (n_in,):
        raise DomainError(f"window has shape {x.shape}, model expects ({n_in},)")
    if not np.all((x > 0) & (x < 1)):
        raise DomainError("window values must lie strictly inside (0, 1)")
    if not (math.isfinite(last_rate) and last_rate > 0):
        raise DomainError(f"last rate must be finite and positive, got {last_rate}")

    if isinstance(model, ElmanNetwork):
        y, _ = elman_step(model, state or HiddenState.zeros(model.layer_sizes[1]), x)
    else:
        y = float(mlp_forward(model, x)[0][0])
    if not math.isfinite(y):
        raise DomainError("model produced a non-finite output")
    y = clamp_output(y, epsilon, diagnostics)
    predicted_return = float(inverse_logistic(np.array([y]), params)[0])
    return invert_returns(last_rate, predicted_return, params.mode)


def forecast_rates(predictions, last_rates, params: NormalizationParams,
                   diagnostics: Optional[ForecastDiagnostics] = None,
                   epsilon: Optional[float] = None) -> np.ndarray:
    """Rate-space forecasts for a sequence of raw normalized predictions."""
    epsilon = settings.clamp_epsilon if epsilon is None else epsilon
    p = np.asarray(predictions, dtype=np.float64).ravel()
    last = np.asarray(last_rates, dtype=np.float64).ravel()
    if p.shape != last.shape:
        raise ShapeError(f"{p.shape[0]} predictions for {last.shape[0]} last rates")
    clamped = np.array([clamp_output(float(y), epsilon, diagnostics) for y in p])
    returns = inverse_logistic(clamped, params) if p.size else p
    return np.array([invert_returns(float(e), float(r), params.mode)
                     for e, r in zip(last, returns)])


def score_mlp(net: MlpNetwork, test: SupervisedSet,
              params: NormalizationParams) -> Tuple[np.ndarray, Metrics]:
    predictions = mlp_predict(net, test.inputs)[:, 0]
    return predictions, evaluate_forecasts(predictions, test.targets, params)


def score_elman(net: ElmanNetwork, warmup, test: SupervisedSet,
                params: NormalizationParams) -> Tuple[np.ndarray, Metrics]:
    """Score the test rows after warming the hidden state on ``warmup`` rows."""
    n_hidden = net.layer_sizes[1]
    state = HiddenState.zeros(n_hidden)
    if warmup is not None and len(warmup):
        state = elman_final_state(net, warmup, state)
    predictions = elman_run(net, test.inputs, state)
    return predictions, evaluate_forecasts(predictions, test.targets, params)


def _ratio(num: Optional[float], den: Optional[float]) -> Optional[float]:
    if num is None or den is None or not (math.isfinite(num) and math.isfinite(den)) or den == 0:
        return None
    return num / den


def compare_models(entries: Sequence[ModelEntry], label: str = "") -> ComparisonReport:
    """Tabulate epochs-to-target and test metrics, with every pairwise ratio.

    Ratios exist only when both runs reached the target; a run that stopped on
    its epoch budget or diverged is flagged instead. Test metrics stay in the
    rows either way.
    """
    if len(entries) < 2:
        raise DomainError("comparison needs at least two runs")
    names = [e.name for e in entries]
    if len(set(names)) != len(names):
        raise DomainError(f"run names must be unique, got {names}")

    rows, flagged = [], []
    for e in entries:
        reached = e.report.reached_target
        rows.append(ComparisonRow(
            name=e.name,
            algorithm=e.report.algorithm.value,
            epochs_to_target=e.report.epochs_to_target,
            reached_target=reached,
            stop_reason=e.report.stop_reason.value,
            final_train_mse=e.report.final_mse if e.report.error_curve else float("nan"),
            test=e.metrics,
        ))
        if not reached:
            flagged.append(e.name)

    by_name = {e.name: e for e in entries}
    ratios = []
    for a, b in itertools.permutations(names, 2):
        ea, eb = by_name[a], by_name[b]
        epoch_ratio = mse_ratio = None
        if ea.report.reached_target and eb.report.reached_target:
            epoch_ratio = _ratio(float(ea.report.epochs_to_target), float(eb.report.epochs_to_target))
            mse_ratio = _ratio(ea.metrics.mse, eb.metrics.mse)
        ratios.append(PairRatio(numerator=a, denominator=b,
                                epoch_ratio=epoch_ratio, test_mse_ratio=mse_ratio))

    report = ComparisonReport(label=label, rows=rows, ratios=ratios, flagged=flagged)
    report.headline.update(_headline(entries, report))
    return report


def _headline(entries: Sequence[ModelEntry], report: ComparisonReport) -> dict:
    """Convergence speed of irprop+ against the other first-order trainers, and the
    recurrent/feedforward test-error ratio."""
    first = {}
    for e in entries:
        first.setdefault(e.report.algorithm, e.name)
    out = {}
    irprop = first.get(Algorithm.IRPROP_PLUS)
    if irprop:
        for other in (Algorithm.BACKPROP, Algorithm.RPROP_PLUS):
            if other in first:
                r = report.ratio(irprop, first[other])
                if r and r.epoch_ratio is not None:
                    out[f"epochs {irprop}/{first[other]}"] = r.epoch_ratio
    ekf = first.get(Algorithm.EKF)
    baseline = irprop or next((first[a] for a in (Algorithm.RPROP_PLUS, Algorithm.BACKPROP)
                               if a in first), None)
    if ekf and baseline:
        r = report.ratio(ekf, baseline)
        if r and r.test_mse_ratio is not None:
            out[f"test_mse {ekf}/{baseline}"] = r.test_mse_ratio
    return out


def format_comparison(report: ComparisonReport) -> str:
    """Human-readable comparison table."""
    lines = []
    if report.label:
        lines.append(f"Comparison: {report.label}")
    header = f"{'run':<16}{'algorithm':<10}{'epochs':>8}{'stop':>16}{'train mse':>14}" \
             f"{'test mse':>14}{'test mae':>12}{'dir acc':>9}"
    lines.append(header)
    lines.append("-" * len(header))
    for row in report.rows:
        epochs = str(row.epochs_to_target) if row.epochs_to_target is not None else "-"
        lines.append(f"{row.name:<16}{row.algorithm:<10}{epochs:>8}{row.stop_reason:>16}"
                     f"{row.final_train_mse:>14.6e}{row.test.mse:>14.6e}{row.test.mae:>12.4e}"
                     f"{row.test.directional_accuracy:>9.3f}")
    lines.append("")
    lines.append("Pairwise ratios (numerator / denominator):")
    for r in report.ratios:
        epoch = f"{r.epoch_ratio:.4f}" if r.epoch_ratio is not None else "n/a"
        mse = f"{r.test_mse_ratio:.4f}" if r.test_mse_ratio is not None else "n/a"
        lines.append(f"  {r.numerator} / {r.denominator}: epochs {epoch}, test mse {mse}")
    if report.flagged:
        lines.append(f"Did not reach target: {', '.join(report.flagged)}")
    for key, value in report.headline.items():
        lines.append(f"{key}: {value:.4f}")
    return "\n".join(lines) + "\n"
