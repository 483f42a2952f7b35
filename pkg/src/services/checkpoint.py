"""
Checkpoint persistence: versioned JSON with exact decimal weights.
"""
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from src.core.errors import CorruptError, VersionError
from src.models.network import ElmanNetwork, MlpNetwork, elman_shapes, mlp_shapes
from src.models.run_config import (
    CHECKPOINT_VERSION,
    Checkpoint,
    CheckpointMetadata,
    CheckpointNormalization,
    ModelKind,
)
from src.models.series import NormalizationParams
from src.utils.file_utils import read_text, write_text_atomic
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

Model = Union[MlpNetwork, ElmanNetwork]


def _exact(x: float) -> str:
    return format(float(x), ".17g")


def build_checkpoint(model: Model, params: NormalizationParams,
                     metadata: Optional[CheckpointMetadata] = None) -> Checkpoint:
    kind = ModelKind.ELMAN if isinstance(model, ElmanNetwork) else ModelKind.FF
    return Checkpoint(
        format_version=CHECKPOINT_VERSION,
        model_kind=kind,
        layer_sizes=model.layer_sizes,
        weights=[_exact(w) for w in model.to_vector()],
        normalization=CheckpointNormalization(
            mean=_exact(params.mean), std=_exact(params.std), mode=params.mode),
        return_mode=params.mode,
        metadata=metadata or CheckpointMetadata(),
    )


def save_checkpoint(model: Model, params: NormalizationParams, path: Union[str, Path],
                    metadata: Optional[CheckpointMetadata] = None,
                    timestamp: bool = True) -> Checkpoint:
    """Write a checkpoint; ``created_at`` is the only field that varies between runs."""
    metadata = (metadata or CheckpointMetadata()).model_copy()
    if timestamp:
        metadata.created_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    checkpoint = build_checkpoint(model, params, metadata)
    write_text_atomic(path, checkpoint.model_dump_json(indent=2) + "\n")
    logger.info(f"Saved {checkpoint.model_kind.value} checkpoint to {path}")
    return checkpoint


def read_checkpoint(path: Union[str, Path]) -> Checkpoint:
    """Parse and validate a checkpoint file without building the model."""
    text = read_text(path)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise CorruptError(f"checkpoint {path} is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise CorruptError(f"checkpoint {path} is not a JSON object")
    version = raw.get("format_version")
    if not isinstance(version, int) or isinstance(version, bool):
        raise CorruptError(f"checkpoint {path} has no integer format_version")
    if version != CHECKPOINT_VERSION:
        raise VersionError(f"checkpoint format {version} is not supported "
                           f"(this build reads version {CHECKPOINT_VERSION})")
    try:
        return Checkpoint.model_validate(raw)
    except ValidationError as e:
        raise CorruptError(f"checkpoint {path} does not match the schema: {e}") from e


def restore(checkpoint: Checkpoint) -> Tuple[Model, NormalizationParams]:
    """Rebuild the model and normalization parameters from a checkpoint."""
    try:
        weights = np.array([float(w) for w in checkpoint.weights], dtype=np.float64)
        params = NormalizationParams(mean=float(checkpoint.normalization.mean),
                                     std=float(checkpoint.normalization.std),
                                     mode=checkpoint.normalization.mode)
    except (ValueError, ValidationError) as e:
        raise CorruptError(f"checkpoint values are not valid numbers: {e}") from e

    sizes = checkpoint.layer_sizes
    if any(s < 1 for s in sizes):
        raise CorruptError(f"invalid layer sizes {sizes}")
    try:
        if checkpoint.model_kind == ModelKind.ELMAN:
            model = ElmanNetwork.from_vector(weights, elman_shapes(sizes))
        else:
            model = MlpNetwork.from_vector(weights, mlp_shapes(sizes))
    except (ValueError, ValidationError) as e:
        raise CorruptError(f"checkpoint weights do not fit layer sizes {sizes}: {e}") from e
    return model, params


def load_checkpoint(path: Union[str, Path]) -> Tuple[Model, NormalizationParams]:
    """Load a checkpoint written by ``save_checkpoint``."""
    model, params = restore(read_checkpoint(path))
    logger.debug(f"Loaded {type(model).__name__} {model.layer_sizes} from {path}")
    return model, params
