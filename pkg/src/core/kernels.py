"""
Dense float64 kernels and the seeded generator shared by every network module.

All pseudo-randomness in the toolkit flows through ``make_rng``: numpy's PCG64
bit generator (64-bit state increments, 128-bit LCG with XSL-RR output),
seeded from the integer seed reduced modulo 2**64. Normal variates come from
``Generator.standard_normal`` (ziggurat transform of the uniform stream), which
is platform independent for a fixed numpy release.
"""
from typing import Sequence

import numpy as np

from src.core.errors import ShapeError

FLOAT = np.float64
_SEED_MOD = 2 ** 64


def make_rng(seed: int) -> np.random.Generator:
    """Create the toolkit's seeded generator."""
    return np.random.Generator(np.random.PCG64(int(seed) % _SEED_MOD))


def derive_seed(seed: int, *keys: int) -> int:
    """Derive a child seed from a master seed and integer keys (e.g. an epoch index)."""
    entropy = [int(seed) % _SEED_MOD] + [int(k) % _SEED_MOD for k in keys]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def as_vector(values, length: int = None, name: str = "vector") -> np.ndarray:
    """Coerce to a finite float64 vector, optionally of a fixed length."""
    arr = np.asarray(values, dtype=FLOAT)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if length is not None and arr.shape[0] != length:
        raise ShapeError(f"{name} has length {arr.shape[0]}, expected {length}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError(f"{name} contains non-finite values")
    return arr


def as_matrix(values, columns: int = None, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite float64 row-major matrix, optionally with a fixed column count."""
    arr = np.asarray(values, dtype=FLOAT)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if columns is not None and arr.shape[1] != columns:
        raise ShapeError(f"{name} has {arr.shape[1]} columns, expected {columns}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError(f"{name} contains non-finite values")
    return np.ascontiguousarray(arr)


def matvec(weights: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Row-major matrix-vector product."""
    return weights @ x


def outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.outer(a, b)


def tanh_layer(weights: np.ndarray, bias: np.ndarray, x: np.ndarray) -> np.ndarray:
    """tanh(W x + b) for a vector, or row-wise for a batch (rows = samples)."""
    if x.ndim == 1:
        return np.tanh(weights @ x + bias)
    return np.tanh(x @ weights.T + bias)


def uniform_matrix(rng: np.random.Generator, shape: Sequence[int], scale: float) -> np.ndarray:
    """Weights drawn uniformly from [-scale, +scale]."""
    return rng.uniform(-scale, scale, size=tuple(shape)).astype(FLOAT)


def readonly(arr: np.ndarray) -> np.ndarray:
    """Return a float64 copy with the writeable flag cleared."""
    out = np.array(arr, dtype=FLOAT, copy=True)
    out.flags.writeable = False
    return out


def all_finite(*arrays: np.ndarray) -> bool:
    return all(bool(np.all(np.isfinite(a))) for a in arrays)
