"""
Services package for the forecasting toolkit.
"""

from .data_io import generate_synthetic, load_rate_series, read_rate_series, write_series_csv
from .preprocess import denormalize, fit_normalizer, log_returns, normalize, prepare_dataset
from .mlp import init_weights, mlp_forward, mlp_gradient
from .rprop import train_feedforward
from .elman import elman_step, init_elman, tbptt_jacobian
from .ekf import ekf_update, train_elman_multistream
from .evaluation import compare_models, evaluate_forecasts, one_step_forecast
from .checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "generate_synthetic",
    "load_rate_series",
    "read_rate_series",
    "write_series_csv",
    "denormalize",
    "fit_normalizer",
    "log_returns",
    "normalize",
    "prepare_dataset",
    "init_weights",
    "mlp_forward",
    "mlp_gradient",
    "train_feedforward",
    "elman_step",
    "init_elman",
    "tbptt_jacobian",
    "ekf_update",
    "train_elman_multistream",
    "compare_models",
    "evaluate_forecasts",
    "one_step_forecast",
    "load_checkpoint",
    "save_checkpoint",
]
