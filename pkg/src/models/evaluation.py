"""
Data models for forecast scoring and model comparison.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from src.models.training import TrainingReport


class Metrics(BaseModel):
    """Forecast error measures; errors in normalized space, direction in return space."""
    mse: float = Field(ge=0)
    rmse: float = Field(ge=0)
    mae: float = Field(ge=0)
    directional_accuracy: float = Field(ge=0, le=1)
    n: int = Field(ge=1)


class ForecastDiagnostics(BaseModel):
    """Counters collected while producing forecasts."""
    forecasts: int = 0
    clamp_events: int = 0


class ModelEntry(BaseModel):
    """One compared run: training outcome plus held-out metrics."""
    name: str
    report: TrainingReport
    metrics: Metrics


class ComparisonRow(BaseModel):
    name: str
    algorithm: str
    epochs_to_target: Optional[int] = None
    reached_target: bool
    stop_reason: str
    final_train_mse: float
    test: Metrics


class PairRatio(BaseModel):
    """Ratios of ``numerator`` over ``denominator`` for a pair of runs."""
    numerator: str
    denominator: str
    epoch_ratio: Optional[float] = None
    test_mse_ratio: Optional[float] = None


class ComparisonReport(BaseModel):
    """Side-by-side comparison of training runs."""
    label: str = ""
    rows: List[ComparisonRow]
    ratios: List[PairRatio]
    flagged: List[str] = Field(default_factory=list)
    headline: Dict[str, float] = Field(default_factory=dict)

    def ratio(self, numerator: str, denominator: str) -> Optional[PairRatio]:
        for r in self.ratios:
            if r.numerator == numerator and r.denominator == denominator:
                return r
        return None


class RunSummary(BaseModel):
    """Contents of a run's ``report.json``."""
    name: str
    config_hash: str
    report: TrainingReport
    metrics: Metrics
    diagnostics: ForecastDiagnostics
    config: Dict[str, Any]


class ForecastResult(BaseModel):
    rate: float = Field(gt=0)
    last_date: str
    model_kind: str
