"""
Plot-ready CSV and JSON artifacts.
"""
from enum import Enum
from pathlib import Path
from typing import Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from src.core.errors import DomainError, ShapeError
from src.models.series import RateSeries, SupervisedSet
from src.models.training import TrainingReport
from src.utils.file_utils import write_text_atomic

PathLike = Union[str, Path]


class PlotKind(str, Enum):
    """Two-column CSV layouts."""
    RAW_SERIES = "raw-series"                  # date,rate
    NORMALIZED_SERIES = "normalized-series"    # date,normalized
    ERROR_CURVE = "error-curve"                # epoch,mse
    FORECAST_VS_ACTUAL = "forecast-vs-actual"  # actual,forecast


def _to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")


def _plot_frame(kind: PlotKind, data) -> pd.DataFrame:
    if kind == PlotKind.RAW_SERIES:
        if not isinstance(data, RateSeries):
            raise DomainError("raw-series plots take a RateSeries")
        return pd.DataFrame({"date": [d.isoformat() for d in data.dates], "rate": data.rates})

    if kind == PlotKind.NORMALIZED_SERIES:
        dates, values = data
        values = getattr(values, "values", values)
        if len(dates) != len(values):
            raise ShapeError(f"{len(dates)} dates for {len(values)} normalized values")
        return pd.DataFrame({"date": [d.isoformat() for d in dates], "normalized": values})

    if kind == PlotKind.ERROR_CURVE:
        if not isinstance(data, TrainingReport):
            raise DomainError("error-curve plots take a TrainingReport")
        return pd.DataFrame({"epoch": np.arange(1, data.epochs_run + 1),
                             "mse": np.asarray(data.error_curve, dtype=np.float64)})

    actual, forecast = data
    actual = np.asarray(actual, dtype=np.float64)
    forecast = np.asarray(forecast, dtype=np.float64)
    if actual.shape != forecast.shape:
        raise ShapeError(f"actual {actual.shape} and forecast {forecast.shape} differ")
    return pd.DataFrame({"actual": actual, "forecast": forecast})


def emit_plot_csv(kind: Union[PlotKind, str], data, path: PathLike) -> None:
    """Write one of the plot layouts in ``PlotKind`` as CSV."""
    kind = PlotKind(kind)
    if data is None:
        raise DomainError(f"no data for {kind.value} plot")
    write_text_atomic(path, _to_csv(_plot_frame(kind, data)))


def write_training_report_csv(report: TrainingReport, path: PathLike) -> None:
    """``epoch,mse`` convergence curve."""
    emit_plot_csv(PlotKind.ERROR_CURVE, report, path)


def write_supervised_csv(data: SupervisedSet, path: PathLike) -> None:
    """One row per sample: x0..x{W-1},target."""
    frame = pd.DataFrame(data.inputs, columns=[f"x{i}" for i in range(data.window)])
    frame["target"] = data.targets
    write_text_atomic(path, _to_csv(frame))


def write_dated_values(dates: Sequence, values, column: str, path: PathLike) -> None:
    values = np.asarray(getattr(values, "values", values), dtype=np.float64)
    if len(dates) != values.shape[0]:
        raise ShapeError(f"{len(dates)} dates for {values.shape[0]} values")
    frame = pd.DataFrame({"date": [d.isoformat() for d in dates], column: values})
    write_text_atomic(path, _to_csv(frame))


def write_json(model: BaseModel, path: PathLike) -> None:
    write_text_atomic(path, model.model_dump_json(indent=2) + "\n")
