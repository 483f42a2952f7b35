"""
Loading, writing and synthesizing daily rate series.
"""
import io
import math
from datetime import date
from pathlib import Path
from typing import BinaryIO, Dict, Optional, Union

import numpy as np
import pandas as pd

from src.core.errors import DomainError, IoError, OrderError, ParseError
from src.core.kernels import make_rng
from src.models.base import build
from src.models.series import RateSeries
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

HEADER = ("date", "rate")
SYNTHETIC_START = date(2005, 1, 3)

SYNTHETIC_DEFAULTS: Dict[str, Dict[str, float]] = {
    "gbm-walk": {"start": 4.0, "mu": 0.0, "sigma": 0.005},
    "noisy-sine": {"level": 4.0, "amplitude": 0.2, "period": 250.0, "noise": 0.01},
    "nonlinear-ar": {"level": 4.0, "a": 0.005, "b": 150.0, "c": -0.3, "noise": 0.003},
}


def load_rate_series(source: BinaryIO, label: str = "") -> RateSeries:
    """Parse a ``date,rate`` CSV byte stream into a validated RateSeries.

    Raises:
        ParseError: header or a row is malformed.
        OrderError: dates are not strictly increasing.
        DomainError: a rate is non-positive or non-finite, or fewer than 2 rows.
    """
    try:
        raw = source.read()
    except OSError as e:
        raise IoError(f"cannot read rate series: {e}") from e
    try:
        text = raw.decode("utf-8-sig") if isinstance(raw, bytes) else raw
    except UnicodeDecodeError as e:
        raise ParseError(f"rate series is not UTF-8: {e}") from e

    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False, index_col=False,
                            skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ParseError(f"malformed CSV: {e}") from e

    columns = tuple(c.strip().lower() for c in frame.columns)
    if columns != HEADER:
        raise ParseError(f"expected header 'date,rate', got {','.join(frame.columns)!r}")

    dates, rates = [], []
    for lineno, (d_text, r_text) in enumerate(frame.itertuples(index=False), start=2):
        if not isinstance(d_text, str) or not isinstance(r_text, str):
            raise ParseError(f"line {lineno}: expected two fields")
        try:
            d = date.fromisoformat(d_text.strip())
            r = float(r_text.strip())
        except ValueError as e:
            raise ParseError(f"line {lineno}: malformed row {d_text!r},{r_text!r}") from e
        if not math.isfinite(r) or r <= 0:
            raise DomainError(f"line {lineno}: rate {r_text!r} must be finite and positive")
        if dates and d <= dates[-1]:
            raise OrderError(f"line {lineno}: date {d} does not follow {dates[-1]}")
        dates.append(d)
        rates.append(r)

    if len(rates) < 2:
        raise DomainError(f"rate series needs at least 2 rows, got {len(rates)}")

    series = build(RateSeries, dates=tuple(dates), rates=np.array(rates), label=label)
    logger.debug(f"Loaded {len(series)} rates for {label or 'unlabelled series'}")
    return series


def write_series_csv(series: RateSeries, sink: BinaryIO) -> None:
    """Write ``date,rate`` CSV with 17 significant digits so reloading is exact."""
    frame = pd.DataFrame({
        "date": [d.isoformat() for d in series.dates],
        "rate": series.rates,
    })
    text = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    try:
        sink.write(text.encode("utf-8"))
        sink.flush()
    except (OSError, ValueError) as e:
        raise IoError(f"cannot write rate series: {e}") from e


def read_rate_series(path: Union[str, Path], label: Optional[str] = None) -> RateSeries:
    """Load a rate series from a file path; the label defaults to the file stem."""
    path = Path(path)
    try:
        with open(path, "rb") as f:
            return load_rate_series(f, label if label is not None else path.stem)
    except FileNotFoundError as e:
        raise IoError(f"rate file not found: {path}") from e
    except IsADirectoryError as e:
        raise IoError(f"rate path is a directory: {path}") from e


def save_rate_series(series: RateSeries, path: Union[str, Path]) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as f:
            write_series_csv(series, f)
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e


def _business_days(n: int):
    return tuple(d.date() for d in pd.bdate_range(SYNTHETIC_START, periods=n))


def _merge_params(kind: str, params: Optional[Dict[str, float]]) -> Dict[str, float]:
    if kind not in SYNTHETIC_DEFAULTS:
        raise DomainError(f"unknown synthetic kind {kind!r}; "
                          f"choose one of {', '.join(SYNTHETIC_DEFAULTS)}")
    merged = dict(SYNTHETIC_DEFAULTS[kind])
    for key, value in (params or {}).items():
        if key not in merged:
            raise DomainError(f"unknown parameter {key!r} for {kind}")
        merged[key] = float(value)
    if not all(math.isfinite(v) for v in merged.values()):
        raise DomainError("synthetic parameters must be finite")
    return merged


def generate_synthetic(kind: str, n: int, seed: int,
                       params: Optional[Dict[str, float]] = None) -> RateSeries:
    """Deterministic synthetic rate series standing in for central-bank fixes.

    Kinds:
        gbm-walk:     E_{t+1} = E_t * exp(mu + sigma * z_t)
        noisy-sine:   E_t = level + amplitude * sin(2 pi t / period) + noise * z_t
        nonlinear-ar: r_t = a * tanh(b * r_{t-1}) + c * r_{t-2} + noise * z_t,
                      E_t = level * exp(sum of r up to t)
    """
    if n < 2:
        raise DomainError(f"synthetic series needs n >= 2, got {n}")
    p = _merge_params(kind, params)
    rng = make_rng(seed)

    if kind == "gbm-walk":
        if p["start"] <= 0 or p["sigma"] < 0:
            raise DomainError("gbm-walk needs start > 0 and sigma >= 0")
        z = rng.standard_normal(n - 1)
        log_path = np.concatenate([[0.0], np.cumsum(p["mu"] + p["sigma"] * z)])
        rates = p["start"] * np.exp(log_path)
    elif kind == "noisy-sine":
        if p["level"] <= 0 or p["period"] <= 0 or p["noise"] < 0:
            raise DomainError("noisy-sine needs level > 0, period > 0 and noise >= 0")
        if abs(p["amplitude"]) >= p["level"]:
            raise DomainError("noisy-sine amplitude must be smaller than the level")
        t = np.arange(n, dtype=np.float64)
        rates = p["level"] + p["amplitude"] * np.sin(2 * np.pi * t / p["period"])
        rates = rates + p["noise"] * rng.standard_normal(n)
        if np.any(rates <= 0):
            raise DomainError("noisy-sine noise drove a rate to zero; reduce noise")
    else:
        if p["level"] <= 0 or p["noise"] < 0:
            raise DomainError("nonlinear-ar needs level > 0 and noise >= 0")
        eps = p["noise"] * rng.standard_normal(n - 1)
        r = np.zeros(n - 1)
        for t in range(n - 1):
            r1 = r[t - 1] if t >= 1 else 0.0
            r2 = r[t - 2] if t >= 2 else 0.0
            r[t] = p["a"] * math.tanh(p["b"] * r1) + p["c"] * r2 + eps[t]
        rates = p["level"] * np.exp(np.concatenate([[0.0], np.cumsum(r)]))

    if not np.all(np.isfinite(rates)) or np.any(rates <= 0):
        raise DomainError(f"{kind} parameters produced non-finite or non-positive rates")
    return build(RateSeries, dates=_business_days(n), rates=rates, label=kind)
