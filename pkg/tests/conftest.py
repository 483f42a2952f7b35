"""
Shared fixtures: seeded generators, tiny networks and small series.
"""
from datetime import date, timedelta

import numpy as np
import pytest

from src.models.network import ElmanNetwork, MlpNetwork
from src.models.series import RateSeries
from src.services.data_io import generate_synthetic, save_rate_series


def series_from(rates, start=date(2005, 1, 3), label="test") -> RateSeries:
    dates = tuple(start + timedelta(days=i) for i in range(len(rates)))
    return RateSeries(dates=dates, rates=np.asarray(rates, dtype=np.float64), label=label)


def one_unit_mlp(w_h, b_h, w_o, b_o) -> MlpNetwork:
    return MlpNetwork(hidden_weights=[[w_h]], hidden_bias=[b_h],
                      output_weights=[[w_o]], output_bias=[b_o])


def constant_mlp(n_in: int, n_hidden: int, output: float) -> MlpNetwork:
    """Zero weights with the output bias set: predicts ``output`` everywhere."""
    return MlpNetwork(hidden_weights=np.zeros((n_hidden, n_in)), hidden_bias=np.zeros(n_hidden),
                      output_weights=np.zeros((1, n_hidden)), output_bias=[output])


def constant_elman(n_in: int, n_hidden: int, output: float) -> ElmanNetwork:
    return ElmanNetwork(input_weights=np.zeros((n_hidden, n_in)),
                        recurrent_weights=np.zeros((n_hidden, n_hidden)),
                        hidden_bias=np.zeros(n_hidden),
                        output_weights=np.zeros((1, n_hidden)), output_bias=[output])


@pytest.fixture
def rng():
    return np.random.default_rng(20050103)


@pytest.fixture
def two_point_csv() -> bytes:
    return b"date,rate\n2005-01-03,3.9\n2005-01-04,3.8\n"


@pytest.fixture
def sine_series() -> RateSeries:
    return generate_synthetic("noisy-sine", 400, seed=3)


@pytest.fixture
def gbm_series() -> RateSeries:
    return generate_synthetic("gbm-walk", 300, seed=11)


@pytest.fixture
def rates_csv(tmp_path):
    """A 600-point nonlinear-ar series written to disk."""
    path = tmp_path / "rates.csv"
    save_rate_series(generate_synthetic("nonlinear-ar", 600, seed=5), path)
    return path
