"""Reading input specs and writing reports.

Inputs are YAML or JSON (JSON is read through the YAML loader). Reports are
canonical JSON written atomically.
"""

from __future__ import annotations

import fcntl
import json
import logging
import os
import tempfile
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from motivic_ie.cohom import GradedWeightedSpace
from motivic_ie.errors import InvalidInputError
from motivic_ie.motivic import CellularVariety, LPoly
from motivic_ie.poset import FinitePoset

logger = logging.getLogger(__name__)


def read_document(path: str | Path) -> Mapping:
    """Parse a YAML or JSON file under a shared lock.

    Raises:
        InvalidInputError: If the file is missing, unreadable or not a mapping.
    """
    file_path = Path(path)
    try:
        with open(file_path, encoding="utf-8") as f:
            fcntl.flock(f.fileno(), fcntl.LOCK_SH)
            try:
                data = yaml.safe_load(f)
            finally:
                fcntl.flock(f.fileno(), fcntl.LOCK_UN)
    except yaml.YAMLError as e:
        raise InvalidInputError(f"Failed to parse {file_path}: {e}") from e
    except OSError as e:
        raise InvalidInputError(f"Failed to read {file_path}: {e}") from e
    if not isinstance(data, Mapping):
        raise InvalidInputError(f"{file_path} must contain a mapping")
    logger.info("Loaded %s", file_path)
    return data


def _wrap(path: str | Path, what: str, build):
    data = read_document(path)
    try:
        return build(data)
    except InvalidInputError as e:
        raise InvalidInputError(f"Invalid {what} in {path}: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInputError(f"Invalid {what} in {path}: {e}") from e


def load_poset(path: str | Path) -> FinitePoset:
    return _wrap(path, "poset", FinitePoset.from_dict)


def load_variety(path: str | Path) -> CellularVariety:
    return _wrap(path, "variety", CellularVariety.from_dict)


def load_cohomology(path: str | Path) -> GradedWeightedSpace:
    return _wrap(path, "cohomology table", GradedWeightedSpace.from_dict)


def to_jsonable(value: Any) -> Any:
    """Convert report values to plain JSON types.

    Fractions become [numerator, denominator]; LPoly values become their
    exponent -> coefficient mapping; tuples become lists.
    """
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return [value.numerator, value.denominator]
    if isinstance(value, LPoly):
        return value.to_dict()
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise InvalidInputError(f"Cannot serialize {type(value).__name__} in a report")


def dump_report(report: Mapping) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"


def save_report(report: Mapping, path: str | Path) -> None:
    """Write a report atomically.

    The JSON goes to a temporary file in the target directory, is flushed
    and fsynced under an exclusive lock, then replaces the target.
    """
    file_path = Path(path)
    text = dump_report(report)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    fd = None
    temp_path = None
    try:
        fd, temp_path = tempfile.mkstemp(suffix=".tmp", prefix=".report_", dir=file_path.parent)
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            fd = None  # os.fdopen takes ownership
            fcntl.flock(f.fileno(), fcntl.LOCK_EX)
            try:
                f.write(text)
                f.flush()
                os.fsync(f.fileno())
            finally:
                fcntl.flock(f.fileno(), fcntl.LOCK_UN)

        if file_path.exists():
            os.chmod(temp_path, file_path.stat().st_mode)
        else:
            os.chmod(temp_path, 0o644)

        os.replace(temp_path, file_path)
        temp_path = None
        logger.info("Saved report to %s", file_path)
    except Exception:
        if fd is not None:
            os.close(fd)
        if temp_path and os.path.exists(temp_path):
            os.unlink(temp_path)
        raise
