"""
File helpers for run artifacts.
"""
import hashlib
import os
import tempfile
from pathlib import Path
from typing import Union

from src.core.errors import IoError
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def ensure_directory(path: Path) -> None:
    """Ensure directory exists, create if it doesn't."""
    try:
        Path(path).mkdir(parents=True, exist_ok=True)
        logger.debug(f"Ensured directory exists: {path}")
    except OSError as e:
        logger.error(f"Error creating directory {path}: {e}")
        raise IoError(f"cannot create directory {path}: {e}") from e


def get_file_hash(file_path: Union[str, Path], algorithm: str = "sha256") -> str:
    """
    Generate hash for a file.

    Args:
        file_path: Path to the file
        algorithm: Hash algorithm (md5, sha256, etc.)

    Returns:
        Hex digest of the file hash
    """
    try:
        hash_obj = hashlib.new(algorithm)
        with open(file_path, 'rb') as f:
            for chunk in iter(lambda: f.read(4096), b""):
                hash_obj.update(chunk)
        return hash_obj.hexdigest()
    except OSError as e:
        logger.error(f"Error computing hash for {file_path}: {e}")
        raise IoError(f"cannot hash {file_path}: {e}") from e


def write_text_atomic(path: Union[str, Path], text: str) -> None:
    """Write ``text`` to a temp file beside ``path`` and move it into place.

    Readers never observe a half-written artifact.
    """
    path = Path(path)
    ensure_directory(path.parent)
    fd, temp_path = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(temp_path, path)
    except OSError as e:
        try:
            os.remove(temp_path)
        except OSError:
            pass
        raise IoError(f"cannot write {path}: {e}") from e


def read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise IoError(f"file not found: {path}") from e
    except (OSError, UnicodeDecodeError) as e:
        raise IoError(f"cannot read {path}: {e}") from e
