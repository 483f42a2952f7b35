"""
Base model for pydantic models that carry numpy arrays.
"""
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from src.core.errors import DomainError
from src.core.kernels import readonly


class ArrayModel(BaseModel):
    """Immutable pydantic model whose ndarray fields are read-only float64 copies."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def __eq__(self, other: Any) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        for name in type(self).model_fields:
            a, b = getattr(self, name), getattr(other, name)
            if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
                if not (isinstance(a, np.ndarray) and isinstance(b, np.ndarray)):
                    return False
                if a.shape != b.shape or not np.array_equal(a, b):
                    return False
            elif a != b:
                return False
        return True

    __hash__ = object.__hash__


def to_array(value: Any, ndim: int) -> np.ndarray:
    """Field-validator helper: coerce to a read-only float64 array of ``ndim`` dims."""
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    return readonly(arr)


def build(model_cls, **fields):
    """Construct a model, translating pydantic validation failures to DomainError."""
    try:
        return model_cls(**fields)
    except ValidationError as e:
        raise DomainError(f"invalid {model_cls.__name__}: {e.errors()[0]['msg']}") from e
