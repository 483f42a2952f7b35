"""
Data models package for the forecasting toolkit.
"""

from .series import (
    NormalizationParams,
    NormalizedSeries,
    RateSeries,
    ReturnMode,
    ReturnSeries,
    SupervisedSet,
)
from .network import ElmanNetwork, Gradient, HiddenState, MlpNetwork
from .training import (
    Algorithm,
    EkfState,
    MultistreamConfig,
    RpropConstants,
    RpropState,
    StopCriteria,
    StopReason,
    TrainingReport,
)
from .evaluation import ComparisonReport, ForecastDiagnostics, Metrics, ModelEntry
from .run_config import Checkpoint, ModelKind, RunConfig

__all__ = [
    "NormalizationParams",
    "NormalizedSeries",
    "RateSeries",
    "ReturnMode",
    "ReturnSeries",
    "SupervisedSet",
    "ElmanNetwork",
    "Gradient",
    "HiddenState",
    "MlpNetwork",
    "Algorithm",
    "EkfState",
    "MultistreamConfig",
    "RpropConstants",
    "RpropState",
    "StopCriteria",
    "StopReason",
    "TrainingReport",
    "ComparisonReport",
    "ForecastDiagnostics",
    "Metrics",
    "ModelEntry",
    "Checkpoint",
    "ModelKind",
    "RunConfig",
]
