"""
Data models for rate series and their preprocessed forms.
"""
from datetime import date
from enum import Enum
from typing import Tuple

import numpy as np
from pydantic import field_validator, model_validator

from src.models.base import ArrayModel, to_array


class ReturnMode(str, Enum):
    """How returns are derived from consecutive rates."""
    LOG_DIFF = "log-diff"      # ln(E_n / E_{n-1})
    LOG_RATIO = "log-ratio"    # ln(E_n) / ln(E_{n-1}), the formula as printed


class RateSeries(ArrayModel):
    """Dated sequence of positive exchange rates."""
    dates: Tuple[date, ...]
    rates: np.ndarray
    label: str = ""

    @field_validator("rates", mode="before")
    @classmethod
    def rates_array(cls, v):
        return to_array(v, 1)

    @model_validator(mode="after")
    def check_invariants(self) -> "RateSeries":
        if len(self.dates) != self.rates.shape[0]:
            raise ValueError("dates and rates differ in length")
        if len(self.dates) < 2:
            raise ValueError("a rate series needs at least 2 points")
        if not np.all(np.isfinite(self.rates)) or np.any(self.rates <= 0):
            raise ValueError("rates must be finite and positive")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("dates must be strictly increasing")
        return self

    def __len__(self) -> int:
        return len(self.dates)


class ReturnSeries(ArrayModel):
    """Returns R_n derived from a rate series; one shorter than its source."""
    values: np.ndarray
    mode: ReturnMode = ReturnMode.LOG_DIFF

    @field_validator("values", mode="before")
    @classmethod
    def values_array(cls, v):
        arr = to_array(v, 1)
        if not np.all(np.isfinite(arr)):
            raise ValueError("returns must be finite")
        return arr

    def __len__(self) -> int:
        return self.values.shape[0]


class NormalizationParams(ArrayModel):
    """Mean and sample standard deviation of the return series."""
    mean: float
    std: float
    mode: ReturnMode = ReturnMode.LOG_DIFF

    @model_validator(mode="after")
    def check_std(self) -> "NormalizationParams":
        if not (np.isfinite(self.mean) and np.isfinite(self.std)) or self.std <= 0:
            raise ValueError("std must be finite and positive")
        return self


class NormalizedSeries(ArrayModel):
    """Logistic-normalized returns, strictly inside (0, 1)."""
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def values_array(cls, v):
        arr = to_array(v, 1)
        if not np.all((arr > 0) & (arr < 1)):
            raise ValueError("normalized values must lie strictly inside (0, 1)")
        return arr

    def __len__(self) -> int:
        return self.values.shape[0]


class SupervisedSet(ArrayModel):
    """Sliding windows (rows) and their next-value targets."""
    inputs: np.ndarray
    targets: np.ndarray

    @field_validator("inputs", mode="before")
    @classmethod
    def inputs_array(cls, v):
        return to_array(v, 2)

    @field_validator("targets", mode="before")
    @classmethod
    def targets_array(cls, v):
        return to_array(v, 1)

    @model_validator(mode="after")
    def check_rows(self) -> "SupervisedSet":
        if self.inputs.shape[0] != self.targets.shape[0]:
            raise ValueError("inputs and targets differ in row count")
        return self

    def __len__(self) -> int:
        return self.targets.shape[0]

    @property
    def window(self) -> int:
        return self.inputs.shape[1]
