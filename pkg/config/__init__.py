"""
Configuration package for the exchange-rate forecasting toolkit.
"""

from .settings import settings, Settings

__all__ = ["settings", "Settings"]
