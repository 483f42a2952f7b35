"""
Logging utilities for the forecasting toolkit.
"""
import sys
import logging
from pathlib import Path
from logging.handlers import RotatingFileHandler
from typing import Optional

_FORMAT = '%(asctime)s | %(levelname)-8s | %(name)s:%(funcName)s:%(lineno)d - %(message)s'
_DATEFMT = '%Y-%m-%d %H:%M:%S'


def setup_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """Setup logger with consistent formatting and optional file rotation.

    Console output goes to stderr so that command output on stdout stays clean.
    A rotating file handler is attached only when ``settings.log_dir`` is set.
    """
    from config.settings import settings

    level = (level or settings.log_level).upper()
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level, logging.INFO))

    # Remove existing handlers to avoid duplicates
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    formatter = logging.Formatter(_FORMAT, datefmt=_DATEFMT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if settings.log_dir:
        try:
            log_path = Path(settings.log_dir)
            log_path.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                log_path / "fxnn.log",
                maxBytes=10 * 1024 * 1024,  # 10MB
                backupCount=5,
            )
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        except OSError:
            # If file logging fails, continue with console only
            pass

    logger.propagate = False
    return logger


def set_level(level: str) -> None:
    """Change the level of every toolkit logger created so far."""
    numeric = getattr(logging, level.upper(), logging.INFO)
    for name, logger in logging.root.manager.loggerDict.items():
        if isinstance(logger, logging.Logger) and name.startswith(("src", "config", "main")):
            logger.setLevel(numeric)
