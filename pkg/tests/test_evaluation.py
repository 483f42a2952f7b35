"""
Tests for forecast scoring, one-step forecasts and run comparison.
"""
import math

import numpy as np
import pytest

from src.core.errors import DomainError, ShapeError
from src.models.evaluation import ForecastDiagnostics, Metrics, ModelEntry
from src.models.network import HiddenState
from src.models.series import NormalizationParams, ReturnMode, ReturnSeries, SupervisedSet
from src.models.training import Algorithm, StopCriteria, StopReason, TrainingReport
from src.services.elman import init_elman
from src.services.rprop import train_feedforward
from src.services.evaluation import (
    clamp_output,
    compare_models,
    evaluate_forecasts,
    forecast_rates,
    format_comparison,
    one_step_forecast,
    score_elman,
)
from src.services.preprocess import normalize, prepare_dataset
from tests.conftest import constant_elman, constant_mlp

UNIT = NormalizationParams(mean=0.0, std=1.0)
METRICS = Metrics(mse=0.01, rmse=0.1, mae=0.08, directional_accuracy=0.6, n=10)


def _report(algorithm, epochs, reached=True, stop=None):
    """A report whose epochs_to_target equals ``epochs`` when the target is reached."""
    if reached and algorithm != Algorithm.EKF:
        epochs += 1
    curve = [0.5] * (epochs - 1) + [1e-4 if reached else 0.2]
    reason = stop or (StopReason.TARGET_REACHED if reached else StopReason.MAX_EPOCHS)
    return TrainingReport(algorithm=algorithm, epochs_run=epochs, error_curve=curve,
                          stop_reason=reason)


class TestEvaluateForecasts:

    def test_perfect_forecast(self):
        actual = np.array([0.2, 0.4, 0.6, 0.8])
        metrics = evaluate_forecasts(actual, actual, UNIT)
        assert metrics.mse == 0.0 and metrics.mae == 0.0
        assert metrics.directional_accuracy == 1.0
        assert metrics.n == 4

    def test_all_signs_opposite(self):
        actual = np.array([0.2, 0.3, 0.7, 0.9])
        metrics = evaluate_forecasts(1.0 - actual, actual, UNIT)
        assert metrics.directional_accuracy == 0.0

    def test_two_of_three_signs(self):
        # below 0.5 is a positive return, above 0.5 a negative one
        actual = np.array([0.2, 0.7, 0.3])
        predicted = np.array([0.4, 0.6, 0.8])
        metrics = evaluate_forecasts(predicted, actual, UNIT)
        assert metrics.directional_accuracy == pytest.approx(2 / 3)

    def test_error_measures(self):
        metrics = evaluate_forecasts([0.5, 0.5], [0.4, 0.7], UNIT)
        assert metrics.mse == pytest.approx((0.01 + 0.04) / 2)
        assert metrics.rmse == pytest.approx(math.sqrt(0.025))
        assert metrics.mae == pytest.approx(0.15)

    def test_out_of_range_prediction_still_scored(self):
        metrics = evaluate_forecasts([1.3, -0.2], [0.4, 0.6], UNIT)
        assert metrics.directional_accuracy == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            evaluate_forecasts([0.5, 0.5], [0.5], UNIT)

    def test_empty(self):
        with pytest.raises(ShapeError):
            evaluate_forecasts([], [], UNIT)

    @pytest.mark.parametrize("scale", [2.0 ** -10, 0.25, 4.0, 2.0 ** 12])
    def test_direction_unchanged_by_rescaled_returns(self, rng, scale):
        # scaling mean and std together scales every denormalized return by the same factor
        params = NormalizationParams(mean=0.0005, std=0.004)
        scaled = NormalizationParams(mean=params.mean * scale, std=params.std * scale)
        predicted = rng.uniform(0.05, 0.95, 200)
        actual = rng.uniform(0.05, 0.95, 200)
        base = evaluate_forecasts(predicted, actual, params)
        other = evaluate_forecasts(predicted, actual, scaled)
        assert other.directional_accuracy == base.directional_accuracy
        assert other.mse == base.mse


class TestOneStepForecast:

    def test_half_output_keeps_rate(self):
        rate = one_step_forecast(constant_mlp(3, 2, 0.5), np.full(3, 0.5), UNIT, 4.123)
        assert rate == 4.123

    def test_true_normalized_value_recovers_rate(self):
        params = NormalizationParams(mean=0.001, std=0.01)
        true_return = math.log(4.2 / 4.0)
        target = normalize(ReturnSeries(values=[true_return]), params).values[0]
        rate = one_step_forecast(constant_mlp(3, 2, float(target)), np.full(3, 0.4), params, 4.0)
        assert rate == pytest.approx(4.2, rel=1e-9)

    def test_log_ratio_mode(self):
        params = NormalizationParams(mean=0.0, std=1.0, mode=ReturnMode.LOG_RATIO)
        rate = one_step_forecast(constant_mlp(3, 2, 0.5), np.full(3, 0.5), params, 4.0)
        assert rate == pytest.approx(1.0)

    def test_out_of_range_output_is_clamped(self):
        diagnostics = ForecastDiagnostics()
        rate = one_step_forecast(constant_mlp(3, 2, 1.2), np.full(3, 0.5),
                                 NormalizationParams(mean=0.0, std=0.01), 4.0,
                                 diagnostics=diagnostics)
        assert math.isfinite(rate) and rate > 0
        assert diagnostics.clamp_events == 1 and diagnostics.forecasts == 1

    def test_elman_with_state(self):
        net = constant_elman(3, 4, 0.5)
        rate = one_step_forecast(net, np.full(3, 0.5), UNIT, 3.9, state=HiddenState.zeros(4))
        assert rate == 3.9

    def test_window_length_checked(self):
        with pytest.raises(DomainError):
            one_step_forecast(constant_mlp(3, 2, 0.5), np.full(4, 0.5), UNIT, 4.0)

    def test_window_values_in_open_interval(self):
        with pytest.raises(DomainError):
            one_step_forecast(constant_mlp(3, 2, 0.5), np.array([0.5, 1.0, 0.5]), UNIT, 4.0)

    def test_last_rate_positive(self):
        with pytest.raises(DomainError):
            one_step_forecast(constant_mlp(3, 2, 0.5), np.full(3, 0.5), UNIT, -1.0)


class TestForecastRates:

    def test_matches_one_step(self):
        params = NormalizationParams(mean=0.0005, std=0.004)
        predictions = np.array([0.3, 0.5, 0.9])
        last = np.array([4.0, 4.1, 4.05])
        rates = forecast_rates(predictions, last, params)
        for y, e, r in zip(predictions, last, rates):
            assert r == one_step_forecast(constant_mlp(1, 1, float(y)), [0.5], params, float(e))

    def test_clamp_counts(self):
        diagnostics = ForecastDiagnostics()
        forecast_rates([0.5, -3.0, 7.0], [4.0, 4.0, 4.0], UNIT, diagnostics)
        assert diagnostics.forecasts == 3 and diagnostics.clamp_events == 2

    def test_clamp_output_bounds(self):
        assert clamp_output(2.0, 1e-9) == 1.0 - 1e-9
        assert clamp_output(-2.0, 1e-9) == 1e-9
        assert clamp_output(0.25, 1e-9) == 0.25

    @pytest.mark.parametrize("mode", [ReturnMode.LOG_DIFF, ReturnMode.LOG_RATIO])
    def test_true_targets_reproduce_test_rates(self, gbm_series, mode):
        prepared = prepare_dataset(gbm_series, mode, window=5)
        diagnostics = ForecastDiagnostics()
        rates = forecast_rates(prepared.test.targets, prepared.test_last_rates(),
                               prepared.params, diagnostics)
        assert diagnostics.clamp_events == 0
        np.testing.assert_allclose(rates, prepared.test_actual_rates(), rtol=1e-9, atol=0)


class TestScoreElman:

    def test_warmup_changes_predictions(self, rng):
        net = init_elman((3, 4, 1), seed=1, scale=1.0)
        test = SupervisedSet(inputs=rng.uniform(0.1, 0.9, (5, 3)), targets=rng.uniform(0.1, 0.9, 5))
        warmup = rng.uniform(0.1, 0.9, (10, 3))
        cold, _ = score_elman(net, None, test, UNIT)
        warm, metrics = score_elman(net, warmup, test, UNIT)
        assert not np.array_equal(cold, warm)
        assert metrics.n == 5


class TestEpochsToTarget:

    def test_feedforward_counts_updates(self):
        report = TrainingReport(algorithm=Algorithm.IRPROP_PLUS, epochs_run=3,
                                error_curve=[0.3, 0.1, 1e-4],
                                stop_reason=StopReason.TARGET_REACHED)
        assert report.epochs_to_target == 2

    def test_ekf_counts_recorded_epochs(self):
        report = TrainingReport(algorithm=Algorithm.EKF, epochs_run=3,
                                error_curve=[0.3, 0.1, 1e-4],
                                stop_reason=StopReason.TARGET_REACHED)
        assert report.epochs_to_target == 3

    def test_unreached(self):
        report = TrainingReport(algorithm=Algorithm.RPROP_PLUS, epochs_run=2,
                                error_curve=[0.3, 0.2], stop_reason=StopReason.MAX_EPOCHS)
        assert report.epochs_to_target is None

    def test_target_met_by_initial_network(self):
        net = constant_mlp(2, 3, 0.5)
        train = SupervisedSet(inputs=np.array([[0.1, 0.2], [0.3, 0.4]]),
                              targets=np.array([0.5, 0.5]))
        _, report = train_feedforward(net, train, Algorithm.IRPROP_PLUS,
                                      StopCriteria(target_mse=1e-3, max_epochs=10))
        assert report.epochs_run == 1
        assert report.epochs_to_target == 0


class TestCompareModels:

    def test_epoch_ratio(self):
        report = compare_models([
            ModelEntry(name="fast", report=_report(Algorithm.IRPROP_PLUS, 75), metrics=METRICS),
            ModelEntry(name="slow", report=_report(Algorithm.BACKPROP, 100), metrics=METRICS),
        ])
        assert report.ratio("fast", "slow").epoch_ratio == pytest.approx(0.75)
        assert report.ratio("slow", "fast").epoch_ratio == pytest.approx(100 / 75)
        assert report.headline["epochs fast/slow"] == pytest.approx(0.75)

    def test_identical_runs(self):
        entries = [ModelEntry(name=n, report=_report(Algorithm.RPROP_PLUS, 40), metrics=METRICS)
                   for n in ("a", "b", "c")]
        report = compare_models(entries)
        assert len(report.ratios) == 6
        for r in report.ratios:
            assert r.epoch_ratio == 1.0 and r.test_mse_ratio == 1.0
        assert report.flagged == []

    def test_diverged_run_flagged(self):
        diverged = _report(Algorithm.BACKPROP, 12, reached=False, stop=StopReason.DIVERGED)
        report = compare_models([
            ModelEntry(name="ok", report=_report(Algorithm.IRPROP_PLUS, 30), metrics=METRICS),
            ModelEntry(name="bad", report=diverged, metrics=METRICS),
        ])
        r = report.ratio("ok", "bad")
        assert r.epoch_ratio is None and r.test_mse_ratio is None
        assert report.flagged == ["bad"]

    def test_unreached_target_has_no_ratios(self):
        better = METRICS.model_copy(update={"mse": 0.002})
        report = compare_models([
            ModelEntry(name="elman", report=_report(Algorithm.EKF, 10, reached=False),
                       metrics=better),
            ModelEntry(name="ff", report=_report(Algorithm.IRPROP_PLUS, 30), metrics=METRICS),
        ])
        r = report.ratio("elman", "ff")
        assert r.epoch_ratio is None and r.test_mse_ratio is None
        assert "test_mse elman/ff" not in report.headline
        assert report.flagged == ["elman"]
        assert report.rows[0].epochs_to_target is None
        assert report.rows[0].test.mse == 0.002

    def test_test_mse_ratio_when_both_reached(self):
        better = METRICS.model_copy(update={"mse": 0.002})
        report = compare_models([
            ModelEntry(name="elman", report=_report(Algorithm.EKF, 10), metrics=better),
            ModelEntry(name="ff", report=_report(Algorithm.IRPROP_PLUS, 30), metrics=METRICS),
        ])
        assert report.ratio("elman", "ff").test_mse_ratio == pytest.approx(0.2)
        assert report.headline["test_mse elman/ff"] == pytest.approx(0.2)

    def test_needs_two_runs(self):
        with pytest.raises(DomainError):
            compare_models([ModelEntry(name="a", report=_report(Algorithm.EKF, 3),
                                       metrics=METRICS)])

    def test_unique_names(self):
        entry = ModelEntry(name="a", report=_report(Algorithm.EKF, 3), metrics=METRICS)
        with pytest.raises(DomainError):
            compare_models([entry, entry])

    def test_format_lists_every_run(self):
        report = compare_models([
            ModelEntry(name="ff-irprop+", report=_report(Algorithm.IRPROP_PLUS, 75),
                       metrics=METRICS),
            ModelEntry(name="elman-ekf", report=_report(Algorithm.EKF, 5), metrics=METRICS),
        ], label="EUR/RON")
        text = format_comparison(report)
        assert "EUR/RON" in text
        assert "ff-irprop+" in text and "elman-ekf" in text
        assert "ff-irprop+ / elman-ekf" in text
