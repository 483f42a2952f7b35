"""
Elman simple recurrent network and truncated-BPTT output derivatives.

Each step receives a window of the last n_in normalized values; the hidden layer
sees its own previous activations through the recurrent weights:

    a_t = W_in x_t + W_rec h_{t-1} + b_h,   h_t = tanh(a_t),   y_t = W_out h_t + b_o
"""
from collections import deque
from typing import Deque, NamedTuple, Sequence, Tuple

import numpy as np

from src.core.errors import DomainError, ShapeError
from src.core.kernels import as_matrix, as_vector, make_rng, uniform_matrix
from src.models.network import ElmanNetwork, HiddenState, elman_shapes

DEFAULT_ELMAN_SIZES = (20, 10, 1)


class StepRecord(NamedTuple):
    x: np.ndarray        # input window
    a: np.ndarray        # hidden pre-activation
    h_prev: np.ndarray   # hidden state entering the step
    h: np.ndarray        # hidden state leaving the step


class StreamBuffer:
    """Ring of the most recent step records, oldest first."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise DomainError(f"buffer capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._records: Deque[StepRecord] = deque(maxlen=capacity)

    def append(self, record: StepRecord) -> None:
        self._records.append(record)

    def __len__(self) -> int:
        return len(self._records)

    def __getitem__(self, i: int) -> StepRecord:
        return self._records[i]

    def newest(self, k: int) -> Sequence[StepRecord]:
        """Last ``k`` records, newest first."""
        out = []
        for i in range(1, min(k, len(self._records)) + 1):
            out.append(self._records[-i])
        return out


def init_elman(layer_sizes: Sequence[int] = DEFAULT_ELMAN_SIZES, seed: int = 0,
               scale: float = 0.1) -> ElmanNetwork:
    """Uniform [-scale, scale] weights from the seeded generator; biases zero."""
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) != 3 or any(s < 1 for s in sizes):
        raise DomainError(f"layer sizes must be three counts >= 1, got {tuple(layer_sizes)}")
    if sizes[2] != 1:
        raise DomainError("the Elman network has a single output")
    if not (np.isfinite(scale) and scale > 0):
        raise DomainError(f"init scale must be positive, got {scale}")
    n_in, n_hidden, n_out = sizes
    rng = make_rng(seed)
    return ElmanNetwork(
        input_weights=uniform_matrix(rng, (n_hidden, n_in), scale),
        recurrent_weights=uniform_matrix(rng, (n_hidden, n_hidden), scale),
        hidden_bias=np.zeros(n_hidden),
        output_weights=uniform_matrix(rng, (n_out, n_hidden), scale),
        output_bias=np.zeros(n_out),
    )


def flatten_elman(net: ElmanNetwork) -> np.ndarray:
    return net.to_vector()


def unflatten_elman(vector: np.ndarray, layer_sizes: Sequence[int]) -> ElmanNetwork:
    return ElmanNetwork.from_vector(vector, elman_shapes(layer_sizes))


def _forward(net: ElmanNetwork, h_prev: np.ndarray, x: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
    a = net.input_weights @ x + net.recurrent_weights @ h_prev + net.hidden_bias
    h = np.tanh(a)
    y = float(net.output_weights[0] @ h + net.output_bias[0])
    return y, a, h


def elman_step(net: ElmanNetwork, state: HiddenState, x) -> Tuple[float, HiddenState]:
    """One step: returns the output and the next hidden state."""
    n_in, n_hidden, _ = net.layer_sizes
    x = as_vector(x, n_in, "input")
    if state.h.shape != (n_hidden,):
        raise ShapeError(f"hidden state has shape {state.h.shape}, expected ({n_hidden},)")
    y, _, h = _forward(net, state.h, x)
    return y, HiddenState(h=h)


def elman_advance(net: ElmanNetwork, h_prev: np.ndarray, buffer: StreamBuffer,
                  x: np.ndarray) -> Tuple[float, np.ndarray]:
    """Step a stream and record the step for later derivative computation."""
    y, a, h = _forward(net, h_prev, x)
    buffer.append(StepRecord(x=x, a=a, h_prev=h_prev, h=h))
    return y, h


def elman_run(net: ElmanNetwork, inputs, initial: HiddenState = None) -> np.ndarray:
    """Thread the hidden state through consecutive rows; one output per row."""
    n_in, n_hidden, _ = net.layer_sizes
    rows = as_matrix(inputs, n_in, "inputs")
    if rows.shape[0] == 0:
        raise ShapeError("input sequence is empty")
    h = np.zeros(n_hidden) if initial is None else initial.h
    if h.shape != (n_hidden,):
        raise ShapeError(f"hidden state has shape {h.shape}, expected ({n_hidden},)")
    outputs = np.empty(rows.shape[0])
    for i, x in enumerate(rows):
        outputs[i], _, h = _forward(net, h, x)
    return outputs


def elman_final_state(net: ElmanNetwork, inputs, initial: HiddenState = None) -> HiddenState:
    """Hidden state after consuming ``inputs`` (used to warm up before scoring)."""
    n_in, n_hidden, _ = net.layer_sizes
    rows = as_matrix(inputs, n_in, "inputs")
    h = np.zeros(n_hidden) if initial is None else initial.h
    for x in rows:
        _, _, h = _forward(net, h, x)
    return HiddenState(h=h)


def tbptt_jacobian(net: ElmanNetwork, buffer: StreamBuffer, window: int) -> np.ndarray:
    """d y_t / d w for the newest step, unrolled at most ``window`` steps back.

    The result follows the canonical Elman enumeration (input_weights,
    recurrent_weights, hidden_bias, output_weights, output_bias). Hidden states
    older than the truncation point are treated as constants.
    """
    if len(buffer) == 0:
        raise ShapeError("stream buffer is empty")
    if window < 1:
        raise DomainError(f"truncation window must be >= 1, got {window}")
    n_in, n_hidden, _ = net.layer_sizes
    records = buffer.newest(window)
    if records[0].x.shape != (n_in,):
        raise ShapeError(f"buffered input has shape {records[0].x.shape}, expected ({n_in},)")

    d_in = np.zeros((n_hidden, n_in))
    d_rec = np.zeros((n_hidden, n_hidden))
    d_bias = np.zeros(n_hidden)
    w_out = net.output_weights[0]

    delta = w_out.copy()                           # dy/dh_k, starting at k = t
    for k, rec in enumerate(records):
        da = delta * (1.0 - rec.h ** 2)
        d_in += np.outer(da, rec.x)
        d_rec += np.outer(da, rec.h_prev)
        d_bias += da
        if k + 1 < len(records):
            delta = net.recurrent_weights.T @ da

    newest = records[0]
    return np.concatenate([d_in.ravel(), d_rec.ravel(), d_bias, newest.h, [1.0]])
