"""
Run configuration and checkpoint schema.
"""
import hashlib
import json
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from config.settings import settings
from src.models.series import ReturnMode
from src.models.training import (
    Algorithm,
    MultistreamConfig,
    RpropConstants,
    StopCriteria,
)

CHECKPOINT_VERSION = 1


class ModelKind(str, Enum):
    """Network families."""
    FF = "ff"
    ELMAN = "elman"


FF_TRAINERS = (Algorithm.BACKPROP, Algorithm.RPROP_PLUS, Algorithm.IRPROP_PLUS)


class SyntheticSpec(BaseModel):
    """Synthetic series in place of a data file."""
    kind: Literal["gbm-walk", "noisy-sine", "nonlinear-ar"] = "nonlinear-ar"
    n: int = Field(default=2100, ge=2)
    seed: int = 0
    params: Dict[str, float] = Field(default_factory=dict)


def _rprop_from_settings() -> RpropConstants:
    return RpropConstants(
        delta0=settings.rprop_delta0,
        eta_plus=settings.rprop_eta_plus,
        eta_minus=settings.rprop_eta_minus,
        delta_min=settings.rprop_delta_min,
        delta_max=settings.rprop_delta_max,
    )


class RunConfig(BaseModel):
    """Everything one training run depends on. Defaults come from Settings."""

    data: Optional[str] = None
    synthetic: Optional[SyntheticSpec] = None
    label: Optional[str] = None

    return_mode: ReturnMode = Field(default_factory=lambda: ReturnMode(settings.return_mode))
    window: int = Field(default_factory=lambda: settings.window, ge=1)
    split_ratio: float = Field(default_factory=lambda: settings.split_ratio, gt=0, lt=1)
    fit_on: Literal["full", "train"] = Field(default_factory=lambda: settings.fit_on)

    model: ModelKind = ModelKind.FF
    trainer: Optional[Algorithm] = None
    hidden: Optional[int] = Field(default=None, ge=1)
    init_scale: float = Field(default_factory=lambda: settings.init_scale, gt=0)
    seed: int = Field(default_factory=lambda: settings.seed)

    target_mse: float = Field(default_factory=lambda: settings.target_mse, gt=0)
    max_epochs: int = Field(default_factory=lambda: settings.max_epochs, ge=1)
    learning_rate: float = Field(default_factory=lambda: settings.learning_rate, gt=0)
    rprop: RpropConstants = Field(default_factory=_rprop_from_settings)

    n_streams: int = Field(default_factory=lambda: settings.n_streams, ge=1)
    stream_length: int = Field(default_factory=lambda: settings.stream_length, ge=2)
    tbptt_window: int = Field(default_factory=lambda: settings.tbptt_window, ge=1)
    ekf_epochs: int = Field(default_factory=lambda: settings.ekf_epochs, ge=1)
    ekf_p0: float = Field(default_factory=lambda: settings.ekf_p0, gt=0)
    ekf_learning_rate: float = Field(default_factory=lambda: settings.ekf_learning_rate, gt=0)
    ekf_process_noise: float = Field(default_factory=lambda: settings.ekf_process_noise, ge=0)
    resample_streams: bool = Field(default_factory=lambda: settings.resample_streams)

    output_dir: str = Field(default_factory=lambda: settings.output_dir)

    @model_validator(mode="after")
    def check_cross_fields(self) -> "RunConfig":
        if self.data and self.synthetic:
            raise ValueError("give either a data file or a synthetic spec, not both")
        if self.trainer is None:
            self.trainer = Algorithm.EKF if self.model == ModelKind.ELMAN else Algorithm.IRPROP_PLUS
        if self.model == ModelKind.ELMAN and self.trainer != Algorithm.EKF:
            raise ValueError("the elman model trains only with ekf")
        if self.model == ModelKind.FF and self.trainer not in FF_TRAINERS:
            raise ValueError("the ff model trains with backprop, rprop+ or irprop+")
        if self.hidden is None:
            self.hidden = settings.elman_hidden if self.model == ModelKind.ELMAN else settings.ff_hidden
        if self.model == ModelKind.ELMAN:
            if self.stream_length <= self.tbptt_window:
                raise ValueError("stream_length must exceed tbptt_window")
            if self.stream_length <= self.window:
                raise ValueError("stream_length must exceed the input window")
        return self

    @property
    def layer_sizes(self) -> Tuple[int, int, int]:
        return self.window, self.hidden, 1

    def stop(self) -> StopCriteria:
        return StopCriteria(target_mse=self.target_mse, max_epochs=self.max_epochs)

    def multistream(self) -> MultistreamConfig:
        return MultistreamConfig(
            n_streams=self.n_streams,
            stream_length=self.stream_length,
            tbptt_window=self.tbptt_window,
            seed=self.seed,
            epochs=self.ekf_epochs,
            target_mse=self.target_mse,
            p0=self.ekf_p0,
            learning_rate=self.ekf_learning_rate,
            process_noise=self.ekf_process_noise,
            pivot_tolerance=settings.ekf_pivot_tolerance,
            resample_streams=self.resample_streams,
        )

    def config_hash(self) -> str:
        """SHA-256 of the configuration with sorted keys, output location excluded."""
        payload = self.model_dump(mode="json", exclude={"output_dir"})
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


class CheckpointNormalization(BaseModel):
    mean: str
    std: str
    mode: ReturnMode


class CheckpointMetadata(BaseModel):
    seed: Optional[int] = None
    config_hash: Optional[str] = None
    algorithm: Optional[str] = None
    stream_length: Optional[int] = None
    data_sha256: Optional[str] = None
    created_at: Optional[str] = None


class Checkpoint(BaseModel):
    """Versioned on-disk snapshot of a trained model.

    Weights follow the canonical enumeration of the model kind and are stored as
    17-significant-digit decimal strings so every double reloads exactly.
    """
    format_version: int = CHECKPOINT_VERSION
    model_kind: ModelKind
    layer_sizes: Tuple[int, int, int]
    weights: List[str]
    normalization: CheckpointNormalization
    return_mode: ReturnMode
    metadata: CheckpointMetadata = Field(default_factory=CheckpointMetadata)
