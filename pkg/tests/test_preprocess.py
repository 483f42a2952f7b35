"""
Tests for returns, logistic normalization, windowing and splits.
"""
import math

import numpy as np
import pytest

from src.core.errors import DomainError
from src.models.series import NormalizationParams, NormalizedSeries, ReturnMode, ReturnSeries
from src.services.preprocess import (
    denormalize,
    fit_normalizer,
    invert_returns,
    log_returns,
    make_windows,
    normalize,
    prepare_dataset,
    split_train_test,
)
from tests.conftest import series_from

UNIT = NormalizationParams(mean=0.0, std=1.0)


def _returns(values, mode=ReturnMode.LOG_DIFF):
    return ReturnSeries(values=np.asarray(values, dtype=np.float64), mode=mode)


class TestLogReturns:

    def test_constant_series(self):
        np.testing.assert_array_equal(log_returns(series_from([1.0, 1.0, 1.0])).values, [0.0, 0.0])

    def test_log_diff(self):
        r = log_returns(series_from([4.0, 4.2])).values
        np.testing.assert_allclose(r, [0.04879016416943205], rtol=1e-12)

    def test_log_ratio(self):
        r = log_returns(series_from([4.0, 4.2]), ReturnMode.LOG_RATIO).values
        np.testing.assert_allclose(r, [math.log(4.2) / math.log(4.0)], rtol=1e-14)
        assert r[0] == pytest.approx(1.0351935, abs=2e-6)

    def test_log_ratio_undefined_at_one(self):
        with pytest.raises(DomainError):
            log_returns(series_from([1.0, 1.1]), ReturnMode.LOG_RATIO)

    def test_length(self, sine_series):
        assert len(log_returns(sine_series)) == len(sine_series) - 1


class TestFitNormalizer:

    def test_textbook_case(self):
        params = fit_normalizer(_returns([1.0, 2.0, 3.0]))
        assert params.mean == 2.0
        assert params.std == pytest.approx(1.0, rel=1e-15)

    def test_two_values(self):
        params = fit_normalizer(_returns([0.1, -0.1]))
        assert params.mean == pytest.approx(0.0, abs=1e-17)
        assert params.std == pytest.approx(0.1414213562373095, rel=1e-12)

    def test_zero_variance(self):
        with pytest.raises(DomainError):
            fit_normalizer(_returns([0.0, 0.0, 0.0]))

    def test_too_short(self):
        with pytest.raises(DomainError):
            fit_normalizer(_returns([0.1]))

    def test_mode_carried(self):
        assert fit_normalizer(_returns([1.0, 2.0], ReturnMode.LOG_RATIO)).mode == ReturnMode.LOG_RATIO


class TestNormalize:

    def test_mean_maps_to_half(self):
        params = NormalizationParams(mean=0.3, std=2.0)
        assert normalize(_returns([0.3]), params).values[0] == 0.5

    def test_one_std_above_and_below(self):
        params = NormalizationParams(mean=0.3, std=2.0)
        v = normalize(_returns([2.3, -1.7]), params).values
        np.testing.assert_allclose(v, [1 / (1 + math.e), 1 / (1 + math.exp(-1))], rtol=1e-14)

    def test_strictly_decreasing(self, rng):
        r = np.sort(rng.normal(scale=3.0, size=1000))
        v = normalize(_returns(r), UNIT).values
        assert np.all(np.diff(v) < 0)

    def test_extreme_returns_stay_inside_interval(self):
        v = normalize(_returns([-1e6, -800.0, 800.0, 1e6]), UNIT).values
        assert np.all((v > 0) & (v < 1))


class TestDenormalize:

    def test_half_is_mean(self):
        assert denormalize(np.array([0.5]), UNIT).values[0] == 0.0

    def test_inverse_of_one_std(self):
        r = denormalize(np.array([0.2689414213699951]), UNIT).values[0]
        assert r == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("bad", [0.0, 1.0, 1.2, -0.1])
    def test_boundary_excluded(self, bad):
        with pytest.raises(DomainError):
            denormalize(np.array([bad]), UNIT)

    @pytest.mark.parametrize("mean, std", [(0.0, 1.0), (0.001, 0.01)])
    def test_identity_over_both_tails(self, mean, std):
        params = NormalizationParams(mean=mean, std=std)
        z = np.linspace(-30.0, 30.0, 6001)
        r = params.mean + params.std * z
        back = denormalize(normalize(_returns(r), params), params).values
        # near 1 the normalized value is spaced eps/2, which costs std * eps * exp(-z)
        eps = np.finfo(np.float64).eps
        bound = (params.std * eps * (8.0 * (1.0 + np.exp(-z)) + 4.0 * np.abs(z))
                 + 4.0 * eps * np.abs(r))
        assert np.all(np.abs(back - r) <= bound)

    def test_identity_to_1e12_inside_ten_std(self):
        params = NormalizationParams(mean=0.001, std=0.01)
        z = np.linspace(-10.0, 10.0, 2001)
        r = params.mean + params.std * z
        back = denormalize(normalize(_returns(r), params), params).values
        np.testing.assert_allclose(back, r, rtol=0, atol=1e-12)

    def test_accepts_normalized_series(self):
        series = NormalizedSeries(values=[0.25, 0.5, 0.75])
        assert len(denormalize(series, UNIT)) == 3


class TestInvertReturns:

    def test_zero_return(self):
        assert invert_returns(4.0, 0.0) == 4.0

    def test_log_diff_example(self):
        assert invert_returns(4.0, 0.04879016, ReturnMode.LOG_DIFF) == pytest.approx(4.2, abs=1e-6)

    def test_log_ratio_example(self):
        assert invert_returns(4.0, 1.0351935, ReturnMode.LOG_RATIO) == pytest.approx(4.2, abs=1e-5)

    def test_log_ratio_undefined_at_one(self):
        with pytest.raises(DomainError):
            invert_returns(1.0, 0.5, ReturnMode.LOG_RATIO)

    def test_non_positive_rate(self):
        with pytest.raises(DomainError):
            invert_returns(0.0, 0.1)

    @pytest.mark.parametrize("mode", list(ReturnMode))
    def test_reconstructs_rates(self, gbm_series, mode):
        returns = log_returns(gbm_series, mode).values
        rates = gbm_series.rates
        rebuilt = np.array([invert_returns(float(e), float(r), mode)
                            for e, r in zip(rates[:-1], returns)])
        np.testing.assert_allclose(rebuilt, rates[1:], rtol=1e-10)


class TestWindowsAndSplit:

    def test_window_count(self):
        values = NormalizedSeries(values=np.linspace(0.1, 0.9, 25))
        data = make_windows(values, 20)
        assert len(data) == 5
        assert data.window == 20

    def test_three_values_window_two(self):
        data = make_windows(NormalizedSeries(values=[0.1, 0.2, 0.3]), 2)
        np.testing.assert_array_equal(data.inputs, [[0.1, 0.2]])
        np.testing.assert_array_equal(data.targets, [0.3])

    def test_row_alignment(self):
        values = NormalizedSeries(values=np.linspace(0.05, 0.95, 30))
        data = make_windows(values, 4)
        for i in range(len(data)):
            np.testing.assert_array_equal(data.inputs[i], values.values[i:i + 4])
            assert data.targets[i] == values.values[i + 4]

    def test_no_target_available(self):
        with pytest.raises(DomainError):
            make_windows(NormalizedSeries(values=np.linspace(0.1, 0.9, 20)), 20)

    @pytest.mark.parametrize("n, ratio, expected", [(100, 0.8, (80, 20)), (5, 0.8, (4, 1))])
    def test_split_sizes(self, n, ratio, expected):
        values = NormalizedSeries(values=np.linspace(0.01, 0.99, n + 1))
        train, test = split_train_test(make_windows(values, 1), ratio)
        assert (len(train), len(test)) == expected

    def test_split_is_chronological(self):
        values = NormalizedSeries(values=np.linspace(0.01, 0.99, 11))
        data = make_windows(values, 1)
        train, test = split_train_test(data, 0.8)
        np.testing.assert_array_equal(np.concatenate([train.targets, test.targets]), data.targets)

    def test_empty_side(self):
        values = NormalizedSeries(values=[0.2, 0.4])
        with pytest.raises(DomainError):
            split_train_test(make_windows(values, 1), 0.8)


class TestPrepareDataset:

    def test_targets_match_test_rates(self, sine_series):
        prepared = prepare_dataset(sine_series, window=10, ratio=0.8)
        last, actual = prepared.test_last_rates(), prepared.test_actual_rates()
        assert len(last) == len(actual) == len(prepared.test)
        expected = normalize(_returns(np.log(actual / last)), prepared.params).values
        np.testing.assert_allclose(prepared.test.targets, expected, rtol=1e-12)

    def test_fit_on_train_ignores_test_period(self, sine_series):
        full = prepare_dataset(sine_series, window=10, fit_on="full")
        train_only = prepare_dataset(sine_series, window=10, fit_on="train")
        seen = full.returns.values[:full.n_train + 10]
        assert train_only.params.mean == pytest.approx(float(np.mean(seen)), rel=1e-12)
        assert train_only.params.mean != full.params.mean

    def test_stored_params_reused(self, sine_series):
        params = NormalizationParams(mean=0.0, std=0.02)
        prepared = prepare_dataset(sine_series, window=10, params=params)
        assert prepared.params == params

    def test_train_values_cover_training_rows(self, sine_series):
        prepared = prepare_dataset(sine_series, window=10)
        values = prepared.train_values.values
        assert len(values) == prepared.n_train + 10
        assert values[-1] == prepared.train.targets[-1]

    def test_series_too_short_for_window(self):
        with pytest.raises(DomainError):
            prepare_dataset(series_from([4.0, 4.1, 4.2]), window=5)
