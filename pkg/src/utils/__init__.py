"""
Utilities package for the forecasting toolkit.
"""

from .file_utils import ensure_directory, get_file_hash, read_text, write_text_atomic
from .logger import setup_logger

__all__ = [
    "ensure_directory",
    "get_file_hash",
    "read_text",
    "write_text_atomic",
    "setup_logger",
]
