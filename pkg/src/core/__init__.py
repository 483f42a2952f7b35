"""
Core numerics and errors for the forecasting toolkit.
"""

from .errors import (
    ForecastError,
    ParseError,
    OrderError,
    DomainError,
    ShapeError,
    IoError,
    NumericError,
    CheckpointError,
    VersionError,
    CorruptError,
    UsageError,
)

__all__ = [
    "ForecastError",
    "ParseError",
    "OrderError",
    "DomainError",
    "ShapeError",
    "IoError",
    "NumericError",
    "CheckpointError",
    "VersionError",
    "CorruptError",
    "UsageError",
]
