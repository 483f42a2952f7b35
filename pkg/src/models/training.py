"""
Data models for trainer state and training outcomes.
"""
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from src.models.base import ArrayModel, to_array


class Algorithm(str, Enum):
    """Training algorithms offered by the toolkit."""
    BACKPROP = "backprop"
    RPROP_PLUS = "rprop+"
    IRPROP_PLUS = "irprop+"
    EKF = "ekf"


class StopReason(str, Enum):
    """Why a training run ended."""
    TARGET_REACHED = "target-reached"
    MAX_EPOCHS = "max-epochs"
    DIVERGED = "diverged"


class StopCriteria(BaseModel):
    """Training stops when MSE <= target_mse or after max_epochs."""
    target_mse: float = Field(default=1e-3, gt=0)
    max_epochs: int = Field(default=1000, ge=1)


class RpropConstants(BaseModel):
    """Step-size adaptation constants of the RPROP family."""
    delta0: float = Field(default=0.1, gt=0)
    eta_plus: float = 1.2
    eta_minus: float = 0.5
    delta_min: float = Field(default=1e-6, gt=0)
    delta_max: float = 50.0

    @model_validator(mode="after")
    def check_ordering(self) -> "RpropConstants":
        if not (0 < self.eta_minus < 1 < self.eta_plus):
            raise ValueError("constants must satisfy 0 < eta_minus < 1 < eta_plus")
        if not (self.delta_min <= self.delta0 <= self.delta_max):
            raise ValueError("delta0 must lie in [delta_min, delta_max]")
        return self


class RpropState(ArrayModel):
    """Per-weight step sizes and history in the canonical weight enumeration."""
    step_sizes: np.ndarray
    prev_grad: np.ndarray
    prev_delta_w: np.ndarray
    prev_error: float = float("inf")
    constants: RpropConstants = Field(default_factory=RpropConstants)

    @field_validator("step_sizes", "prev_grad", "prev_delta_w", mode="before")
    @classmethod
    def vector(cls, v):
        return to_array(v, 1)

    @model_validator(mode="after")
    def check_state(self) -> "RpropState":
        n = self.step_sizes.shape[0]
        if self.prev_grad.shape != (n,) or self.prev_delta_w.shape != (n,):
            raise ValueError("state vectors differ in length")
        c = self.constants
        if np.any(self.step_sizes < c.delta_min) or np.any(self.step_sizes > c.delta_max):
            raise ValueError("step sizes must lie in [delta_min, delta_max]")
        return self

    @classmethod
    def initial(cls, n_weights: int, constants: RpropConstants = None) -> "RpropState":
        constants = constants or RpropConstants()
        return cls(
            step_sizes=np.full(n_weights, constants.delta0),
            prev_grad=np.zeros(n_weights),
            prev_delta_w=np.zeros(n_weights),
            constants=constants,
        )


class TrainingReport(BaseModel):
    """Outcome of one training run."""
    algorithm: Algorithm
    epochs_run: int = Field(ge=0)
    error_curve: List[float] = Field(default_factory=list)
    stop_reason: StopReason
    wall_time: float = Field(default=0.0, ge=0)
    aborted_updates: int = 0

    @model_validator(mode="after")
    def check_curve(self) -> "TrainingReport":
        if len(self.error_curve) != self.epochs_run:
            raise ValueError("error_curve length must equal epochs_run")
        return self

    @property
    def final_mse(self) -> float:
        return self.error_curve[-1] if self.error_curve else float("nan")

    @property
    def reached_target(self) -> bool:
        return self.stop_reason == StopReason.TARGET_REACHED

    @property
    def epochs_to_target(self) -> Optional[int]:
        """Weight-update epochs spent before the target MSE was observed.

        The feedforward curve records the loss at the start of each epoch, so its
        last entry follows epochs_run - 1 updates. The EKF curve records the error
        accumulated during each epoch, so every entry follows a full epoch.
        """
        if not self.reached_target:
            return None
        if self.algorithm == Algorithm.EKF:
            return self.epochs_run
        return self.epochs_run - 1


class EkfState(ArrayModel):
    """Global EKF covariance over all weights plus the noise and rate scalars."""
    covariance: np.ndarray
    process_noise: float = Field(default=1e-6, ge=0)
    learning_rate: float = Field(default=0.5, gt=0)
    step: int = 0
    aborted: int = 0

    @field_validator("covariance", mode="before")
    @classmethod
    def matrix(cls, v):
        return to_array(v, 2)

    @model_validator(mode="after")
    def check_square(self) -> "EkfState":
        n, m = self.covariance.shape
        if n != m:
            raise ValueError("covariance must be square")
        return self

    @classmethod
    def initial(cls, n_weights: int, p0: float = 100.0, process_noise: float = 1e-6,
                learning_rate: float = 0.5) -> "EkfState":
        return cls(covariance=p0 * np.eye(n_weights), process_noise=process_noise,
                   learning_rate=learning_rate)


class MultistreamConfig(BaseModel):
    """Multistream EKF training parameters."""
    n_streams: int = Field(default=20, ge=1)
    stream_length: int = Field(default=200, ge=2)
    tbptt_window: int = Field(default=20, ge=1)
    seed: int = 0
    epochs: int = Field(default=10, ge=1)
    target_mse: float = Field(default=1e-3, gt=0)
    p0: float = Field(default=100.0, gt=0)
    learning_rate: float = Field(default=0.5, gt=0)
    process_noise: float = Field(default=1e-6, ge=0)
    pivot_tolerance: float = Field(default=1e-12, gt=0)
    resample_streams: bool = True

    @model_validator(mode="after")
    def check_lengths(self) -> "MultistreamConfig":
        if self.stream_length <= self.tbptt_window:
            raise ValueError("stream_length must exceed tbptt_window")
        return self


class StreamPlan(BaseModel):
    """Start offsets of the training streams."""
    starts: Tuple[int, ...]
    stream_length: int
