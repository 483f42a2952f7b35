"""
Batch command-line interface.
"""
from .app import build_parser, run_cli

__all__ = ["build_parser", "run_cli"]
