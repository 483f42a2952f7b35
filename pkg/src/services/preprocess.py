"""
Returns, logistic normalization, supervised windows and chronological splits.

The logistic map is applied exactly as published, 1 / (1 + exp((R - mean) / std)),
which is *decreasing* in R: a positive return maps below 0.5. Anything that
reasons about the sign of a return must denormalize first.
"""
import math
from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, ConfigDict
from scipy.special import expit

from src.core.errors import DomainError
from src.models.base import build
from src.models.series import (
    NormalizationParams,
    NormalizedSeries,
    RateSeries,
    ReturnMode,
    ReturnSeries,
    SupervisedSet,
)
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

# Largest double below 1 and smallest normal double: the logistic output is
# pinned inside the open interval even where exp() saturates.
_UPPER = float(np.nextafter(1.0, 0.0))
_LOWER = float(np.finfo(np.float64).tiny)


def log_returns(series: RateSeries, mode: ReturnMode = ReturnMode.LOG_DIFF) -> ReturnSeries:
    """Return series of length N-1 in the requested mode."""
    mode = ReturnMode(mode)
    rates = series.rates
    if mode == ReturnMode.LOG_DIFF:
        values = np.log(rates[1:] / rates[:-1])
    else:
        previous = np.log(rates[:-1])
        if np.any(previous == 0.0):
            idx = int(np.flatnonzero(previous == 0.0)[0])
            raise DomainError(f"log-ratio return undefined: rate at index {idx} equals 1")
        values = np.log(rates[1:]) / previous
    if not np.all(np.isfinite(values)):
        raise DomainError("returns are not finite")
    return ReturnSeries(values=values, mode=mode)


def fit_normalizer(returns: ReturnSeries) -> NormalizationParams:
    """Arithmetic mean and sample (n-1) standard deviation of the returns."""
    values = returns.values
    if values.shape[0] < 2:
        raise DomainError("normalizer needs at least 2 returns")
    if np.all(values == values[0]):
        raise DomainError("returns are all identical; standard deviation is zero")
    std = float(np.std(values, ddof=1))
    if std == 0.0:
        raise DomainError("standard deviation of returns is zero")
    return NormalizationParams(mean=float(np.mean(values)), std=std, mode=returns.mode)


def _logistic(values: np.ndarray, params: NormalizationParams) -> np.ndarray:
    z = (np.asarray(values, dtype=np.float64) - params.mean) / params.std
    return np.clip(expit(-z), _LOWER, _UPPER)


def normalize(returns: ReturnSeries, params: NormalizationParams) -> NormalizedSeries:
    """R~ = 1 / (1 + exp((R - mean) / std)), strictly inside (0, 1)."""
    return NormalizedSeries(values=_logistic(returns.values, params))


def inverse_logistic(values: np.ndarray, params: NormalizationParams) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    if not np.all((v > 0) & (v < 1)):
        raise DomainError("normalized values must lie strictly inside (0, 1)")
    # 1 - v is exact for v >= 0.5, but v itself is spaced eps/2 there, so R carries
    # an error of about std * eps / (1 - v) that no inverse can remove
    return params.mean + params.std * np.log((1.0 - v) / v)


def denormalize(values, params: NormalizationParams) -> ReturnSeries:
    """Inverse logistic map: R = mean + std * ln(1/R~ - 1)."""
    if isinstance(values, NormalizedSeries):
        values = values.values
    return ReturnSeries(values=inverse_logistic(values, params), mode=params.mode)


def invert_returns(last_rate: float, predicted_return: float,
                   mode: ReturnMode = ReturnMode.LOG_DIFF) -> float:
    """Next rate implied by a return: E*exp(R) (log-diff) or exp(R*ln E) (log-ratio)."""
    mode = ReturnMode(mode)
    if not (math.isfinite(last_rate) and last_rate > 0):
        raise DomainError(f"last rate must be finite and positive, got {last_rate}")
    if not math.isfinite(predicted_return):
        raise DomainError("predicted return must be finite")
    if mode == ReturnMode.LOG_DIFF:
        return last_rate * math.exp(predicted_return)
    if last_rate == 1.0:
        raise DomainError("log-ratio inversion undefined at a rate of exactly 1")
    return math.exp(predicted_return * math.log(last_rate))


def make_windows(values: NormalizedSeries, window: int) -> SupervisedSet:
    """Row i = values[i:i+window], target i = values[i+window]."""
    v = values.values
    if window < 1:
        raise DomainError(f"window must be >= 1, got {window}")
    if v.shape[0] <= window:
        raise DomainError(f"{v.shape[0]} values leave no target for window {window}")
    inputs = sliding_window_view(v, window)[:-1]
    return SupervisedSet(inputs=inputs, targets=v[window:])


def train_size(n_rows: int, ratio: float) -> int:
    """Rows assigned to training by a chronological split."""
    if not (0 < ratio < 1):
        raise DomainError(f"split ratio must lie in (0, 1), got {ratio}")
    n_train = math.floor(ratio * n_rows + 1e-9)
    if n_train < 1 or n_train >= n_rows:
        raise DomainError(f"ratio {ratio} on {n_rows} rows leaves an empty side")
    return n_train


def split_train_test(data: SupervisedSet, ratio: float) -> Tuple[SupervisedSet, SupervisedSet]:
    """First floor(ratio*N) rows train, the remainder test; no shuffling."""
    n_train = train_size(len(data), ratio)
    train = SupervisedSet(inputs=data.inputs[:n_train], targets=data.targets[:n_train])
    test = SupervisedSet(inputs=data.inputs[n_train:], targets=data.targets[n_train:])
    return train, test


class PreparedData(BaseModel):
    """Everything downstream stages need from one rate series."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    series: RateSeries
    returns: ReturnSeries
    params: NormalizationParams
    normalized: NormalizedSeries
    train: SupervisedSet
    test: SupervisedSet
    window: int
    n_train: int

    @property
    def train_values(self) -> NormalizedSeries:
        """Normalized values touched by training rows (inputs and targets)."""
        return NormalizedSeries(values=self.normalized.values[:self.n_train + self.window])

    def test_last_rates(self) -> np.ndarray:
        """Rate observed just before each test target, for rate-space forecasts."""
        # return index j relates rates j and j+1; target row i is return index i+window
        first = self.n_train + self.window
        return self.series.rates[first:first + len(self.test)]

    def test_actual_rates(self) -> np.ndarray:
        first = self.n_train + self.window + 1
        return self.series.rates[first:first + len(self.test)]


def prepare_dataset(series: RateSeries, mode: ReturnMode = ReturnMode.LOG_DIFF,
                    window: int = 20, ratio: float = 0.8, fit_on: str = "full",
                    params: Optional[NormalizationParams] = None) -> PreparedData:
    """returns -> normalizer -> normalized -> windows -> chronological split.

    ``fit_on="train"`` fits the normalizer only on returns seen by training rows,
    avoiding lookahead into the test period. Passing ``params`` skips fitting and
    reuses a stored normalizer (its mode wins over ``mode``).
    """
    if fit_on not in ("full", "train"):
        raise DomainError(f"fit_on must be 'full' or 'train', got {fit_on!r}")
    if params is not None:
        mode = params.mode
    returns = log_returns(series, mode)
    n_rows = len(returns) - window
    if window < 1 or n_rows < 1:
        raise DomainError(f"{len(returns)} returns leave no supervised rows for window {window}")
    n_train = train_size(n_rows, ratio)

    if params is None:
        fitted = returns.values[:n_train + window] if fit_on == "train" else returns.values
        params = fit_normalizer(ReturnSeries(values=fitted, mode=returns.mode))

    normalized = normalize(returns, params)
    data = make_windows(normalized, window)
    train, test = split_train_test(data, ratio)
    logger.info(f"Prepared {series.label or 'series'}: {len(series)} rates, "
                f"{len(train)} train / {len(test)} test rows (window {window}, {returns.mode.value})")
    return build(PreparedData, series=series, returns=returns, params=params,
                 normalized=normalized, train=train, test=test, window=window, n_train=n_train)
