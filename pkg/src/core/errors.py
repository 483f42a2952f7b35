"""
Error hierarchy for the forecasting toolkit.

Every error carries the process exit code the CLI reports for it.
"""


class ForecastError(Exception):
    """Root of all toolkit errors."""
    exit_code = 3


class ParseError(ForecastError):
    """A CSV record or structured file could not be parsed."""


class OrderError(ForecastError):
    """Dates are not strictly increasing."""


class DomainError(ForecastError, ValueError):
    """A value lies outside the domain an operation accepts."""


class ShapeError(ForecastError, ValueError):
    """Array dimensions do not agree with the network or data set."""


class IoError(ForecastError, OSError):
    """Reading from or writing to a stream failed."""


class NumericError(ForecastError, ArithmeticError):
    """A numerical procedure could not proceed (singular system, non-finite state)."""
    exit_code = 4


class CheckpointError(ForecastError):
    """Base for checkpoint loading failures."""


class VersionError(CheckpointError):
    """Checkpoint was written by an unsupported format version."""


class CorruptError(CheckpointError):
    """Checkpoint schema or array shapes are inconsistent."""


class UsageError(ForecastError):
    """Invalid command-line usage or run configuration."""
    exit_code = 2
