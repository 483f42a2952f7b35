"""
Feedforward network: initialization, forward pass, MSE loss and backpropagation.

Layer activations are fixed: identity on the input, tanh on the hidden layer,
identity on the output. Gradients are exact full-batch derivatives of
mean((y - t)^2) over samples and outputs.
"""
from typing import Sequence, Tuple

import numpy as np

from src.core.errors import DomainError, ShapeError
from src.core.kernels import as_matrix, as_vector, make_rng, tanh_layer, uniform_matrix
from src.models.network import Gradient, MlpNetwork, mlp_shapes
from src.models.series import SupervisedSet

DEFAULT_LAYER_SIZES = (20, 40, 1)


def _check_sizes(layer_sizes: Sequence[int]) -> Tuple[int, int, int]:
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) != 3 or any(s < 1 for s in sizes):
        raise DomainError(f"layer sizes must be three counts >= 1, got {tuple(layer_sizes)}")
    return sizes


def init_weights(layer_sizes: Sequence[int] = DEFAULT_LAYER_SIZES, seed: int = 0,
                 scale: float = 0.1) -> MlpNetwork:
    """Weights uniform in [-scale, scale] from the seeded generator; biases zero."""
    n_in, n_hidden, n_out = _check_sizes(layer_sizes)
    if not (np.isfinite(scale) and scale > 0):
        raise DomainError(f"init scale must be positive, got {scale}")
    rng = make_rng(seed)
    return MlpNetwork(
        hidden_weights=uniform_matrix(rng, (n_hidden, n_in), scale),
        hidden_bias=np.zeros(n_hidden),
        output_weights=uniform_matrix(rng, (n_out, n_hidden), scale),
        output_bias=np.zeros(n_out),
    )


def mlp_forward(net: MlpNetwork, x) -> Tuple[np.ndarray, np.ndarray]:
    """Return (output, hidden activations) for one input vector."""
    n_in = net.layer_sizes[0]
    x = as_vector(x, n_in, "input")
    h = tanh_layer(net.hidden_weights, net.hidden_bias, x)
    y = net.output_weights @ h + net.output_bias
    return y, h


def mlp_predict(net: MlpNetwork, inputs) -> np.ndarray:
    """Outputs for a batch (rows = samples), shape (samples, n_out)."""
    inputs = as_matrix(inputs, net.layer_sizes[0], "inputs")
    h = tanh_layer(net.hidden_weights, net.hidden_bias, inputs)
    return h @ net.output_weights.T + net.output_bias


def _targets_matrix(net: MlpNetwork, data: SupervisedSet) -> np.ndarray:
    if len(data) == 0:
        raise ShapeError("data set is empty")
    if data.window != net.layer_sizes[0]:
        raise ShapeError(f"data has {data.window} columns, network expects {net.layer_sizes[0]}")
    t = data.targets.reshape(-1, 1)
    if net.layer_sizes[2] != 1:
        t = np.repeat(t, net.layer_sizes[2], axis=1)
    return t


def mlp_loss(net: MlpNetwork, data: SupervisedSet) -> float:
    """Mean squared error over samples (and outputs)."""
    t = _targets_matrix(net, data)
    y = mlp_predict(net, data.inputs)
    return float(np.mean((y - t) ** 2))


def mlp_gradient(net: MlpNetwork, data: SupervisedSet) -> Tuple[float, Gradient]:
    """Full-batch loss and its exact gradient by backpropagation."""
    t = _targets_matrix(net, data)
    x = data.inputs
    h = tanh_layer(net.hidden_weights, net.hidden_bias, x)
    y = h @ net.output_weights.T + net.output_bias
    err = y - t
    loss = float(np.mean(err ** 2))

    delta_out = 2.0 * err / err.size                                  # (samples, n_out)
    grad_wo = delta_out.T @ h
    grad_bo = delta_out.sum(axis=0)
    delta_hidden = (delta_out @ net.output_weights) * (1.0 - h ** 2)  # (samples, n_hidden)
    grad_wh = delta_hidden.T @ x
    grad_bh = delta_hidden.sum(axis=0)

    return loss, Gradient(hidden_weights=grad_wh, hidden_bias=grad_bh,
                          output_weights=grad_wo, output_bias=grad_bo)


def flatten_mlp(net) -> np.ndarray:
    """Canonical weight vector of a network or gradient."""
    return net.to_vector()


def unflatten_mlp(vector: np.ndarray, layer_sizes: Sequence[int], cls=MlpNetwork):
    return cls.from_vector(vector, mlp_shapes(_check_sizes(layer_sizes)))
