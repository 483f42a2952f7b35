"""
Weight containers for the feedforward and Elman networks.

Both containers define a canonical flat enumeration of their parameters which is
shared by the trainers, the EKF covariance and checkpoints:

* MLP:   hidden_weights (row-major), hidden_bias, output_weights (row-major), output_bias
* Elman: input_weights, recurrent_weights, hidden_bias, output_weights, output_bias
"""
from typing import ClassVar, List, Tuple

import numpy as np
from pydantic import field_validator, model_validator

from src.core.errors import ShapeError
from src.models.base import ArrayModel, to_array


class _ParameterSet(ArrayModel):
    """Fixed set of named arrays with a canonical flat enumeration."""

    param_order: ClassVar[Tuple[str, ...]] = ()

    def arrays(self) -> List[np.ndarray]:
        return [getattr(self, name) for name in self.param_order]

    def to_vector(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.arrays()])

    @property
    def n_weights(self) -> int:
        return sum(a.size for a in self.arrays())

    def shapes(self) -> List[Tuple[int, ...]]:
        return [a.shape for a in self.arrays()]

    @classmethod
    def from_vector(cls, vector: np.ndarray, shapes: List[Tuple[int, ...]]):
        vector = np.asarray(vector, dtype=np.float64)
        total = sum(int(np.prod(s)) for s in shapes)
        if vector.ndim != 1 or vector.shape[0] != total:
            raise ShapeError(f"weight vector has shape {vector.shape}, expected ({total},)")
        fields, offset = {}, 0
        for name, shape in zip(cls.param_order, shapes):
            size = int(np.prod(shape))
            fields[name] = vector[offset:offset + size].reshape(shape)
            offset += size
        return cls(**fields)

    def is_finite(self) -> bool:
        return all(bool(np.all(np.isfinite(a))) for a in self.arrays())


class MlpParameters(_ParameterSet):
    """Arrays of an input-hidden-output feedforward net."""
    hidden_weights: np.ndarray
    hidden_bias: np.ndarray
    output_weights: np.ndarray
    output_bias: np.ndarray

    param_order: ClassVar[Tuple[str, ...]] = (
        "hidden_weights", "hidden_bias", "output_weights", "output_bias")

    @field_validator("hidden_weights", "output_weights", mode="before")
    @classmethod
    def matrix(cls, v):
        return to_array(v, 2)

    @field_validator("hidden_bias", "output_bias", mode="before")
    @classmethod
    def vector(cls, v):
        return to_array(v, 1)

    @model_validator(mode="after")
    def check_shapes(self):
        n_hidden, _ = self.hidden_weights.shape
        n_out, n_hidden_o = self.output_weights.shape
        if self.hidden_bias.shape != (n_hidden,) or n_hidden_o != n_hidden:
            raise ValueError("hidden layer dimensions disagree")
        if self.output_bias.shape != (n_out,):
            raise ValueError("output layer dimensions disagree")
        return self

    @property
    def layer_sizes(self) -> Tuple[int, int, int]:
        n_hidden, n_in = self.hidden_weights.shape
        return n_in, n_hidden, self.output_weights.shape[0]


class MlpNetwork(MlpParameters):
    """Feedforward net: identity input, tanh hidden layer, linear output."""

    @model_validator(mode="after")
    def check_finite(self):
        if not self.is_finite():
            raise ValueError("network weights must be finite")
        return self


class Gradient(MlpParameters):
    """dMSE/dw laid out like the network it belongs to."""


class ElmanNetwork(_ParameterSet):
    """Elman simple recurrent network: tanh fully recurrent hidden layer, linear output."""
    input_weights: np.ndarray
    recurrent_weights: np.ndarray
    hidden_bias: np.ndarray
    output_weights: np.ndarray
    output_bias: np.ndarray

    param_order: ClassVar[Tuple[str, ...]] = (
        "input_weights", "recurrent_weights", "hidden_bias", "output_weights", "output_bias")

    @field_validator("input_weights", "recurrent_weights", "output_weights", mode="before")
    @classmethod
    def matrix(cls, v):
        return to_array(v, 2)

    @field_validator("hidden_bias", "output_bias", mode="before")
    @classmethod
    def vector(cls, v):
        return to_array(v, 1)

    @model_validator(mode="after")
    def check_shapes(self):
        n_hidden, _ = self.input_weights.shape
        if self.recurrent_weights.shape != (n_hidden, n_hidden):
            raise ValueError("recurrent weights must be n_hidden x n_hidden")
        if self.hidden_bias.shape != (n_hidden,):
            raise ValueError("hidden bias length disagrees with n_hidden")
        n_out, n_hidden_o = self.output_weights.shape
        if n_hidden_o != n_hidden or self.output_bias.shape != (n_out,):
            raise ValueError("output layer dimensions disagree")
        if not self.is_finite():
            raise ValueError("network weights must be finite")
        return self

    @property
    def layer_sizes(self) -> Tuple[int, int, int]:
        n_hidden, n_in = self.input_weights.shape
        return n_in, n_hidden, self.output_weights.shape[0]


def elman_shapes(layer_sizes) -> List[Tuple[int, ...]]:
    n_in, n_hidden, n_out = layer_sizes
    return [(n_hidden, n_in), (n_hidden, n_hidden), (n_hidden,), (n_out, n_hidden), (n_out,)]


def mlp_shapes(layer_sizes) -> List[Tuple[int, ...]]:
    n_in, n_hidden, n_out = layer_sizes
    return [(n_hidden, n_in), (n_hidden,), (n_out, n_hidden), (n_out,)]


def elman_weight_count(layer_sizes) -> int:
    return sum(int(np.prod(s)) for s in elman_shapes(layer_sizes))


class HiddenState(ArrayModel):
    """Elman context units; zero at a stream start, inside (-1, 1) afterwards."""
    h: np.ndarray

    @field_validator("h", mode="before")
    @classmethod
    def vector(cls, v):
        return to_array(v, 1)

    @model_validator(mode="after")
    def check_bounds(self):
        if not np.all(np.abs(self.h) <= 1.0):
            raise ValueError("hidden state entries must lie in [-1, 1]")
        return self

    @classmethod
    def zeros(cls, n_hidden: int) -> "HiddenState":
        return cls(h=np.zeros(n_hidden))
