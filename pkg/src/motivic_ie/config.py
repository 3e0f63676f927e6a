"""Run configuration for the command-line interface."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from motivic_ie.errors import InvalidInputError
from motivic_ie.guards import MAX_ENUMERATION, MAX_MATRIX_BYTES, CostGuard

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("json", "table")

ENV_FORMAT = "MOTIVIC_IE_FORMAT"
ENV_WORKERS = "MOTIVIC_IE_WORKERS"
ENV_MAX_ENUMERATION = "MOTIVIC_IE_MAX_ENUMERATION"
ENV_GUARD_BYTES = "MOTIVIC_IE_GUARD_BYTES"
ENV_LOG_LEVEL = "MOTIVIC_IE_LOG_LEVEL"

DEFAULT_LOG_LEVEL = "WARNING"

# Parameters whose command-line flag is a single dash
SHORT_FLAGS = ("n", "N")


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError as e:
        raise InvalidInputError(f"Environment variable {name} must be an integer, got {value!r}") from e


def default_format() -> str:
    return os.environ.get(ENV_FORMAT, "json")


def default_workers() -> int:
    return _env_int(ENV_WORKERS, 1)


def default_log_level() -> str:
    return os.environ.get(ENV_LOG_LEVEL, DEFAULT_LOG_LEVEL).upper()


def guard_from_env(guard_bytes: int | None = None, max_enumeration: int | None = None) -> CostGuard:
    """Cost guard from explicit overrides, then environment, then defaults."""
    return CostGuard(
        max_enumeration=max_enumeration
        if max_enumeration is not None
        else _env_int(ENV_MAX_ENUMERATION, MAX_ENUMERATION),
        max_matrix_bytes=guard_bytes if guard_bytes is not None else _env_int(ENV_GUARD_BYTES, MAX_MATRIX_BYTES),
    )


@dataclass
class RunConfig:
    """Everything a command needs; identical configs give identical output.

    Attributes:
        command: Subcommand name.
        poset: Poset file, or None to use a named family.
        variety: Cellular variety file.
        variety_cohomology: Cohomology table file.
        output_format: "json" or "table".
        output: Write the report here instead of stdout.
        workers: Process pool size for finite-field enumeration.
        guard: Cost guard applied to every computation.
    """

    command: str
    poset: Path | None = None
    variety: Path | None = None
    variety_cohomology: Path | None = None
    family: str | None = None
    family_params: dict = field(default_factory=dict)
    q: int | None = None
    d: int | None = None
    k: int | None = None
    n: int | None = None
    N: int | None = None
    seed: int = 0
    dmax: int | None = None
    dim: int | None = None
    kmax: int | None = None
    alphabet: int | None = None
    cutoff: int | None = None
    parts: tuple[int, ...] = ()
    method: str = "both"
    oracle: str | None = None
    suite: str | None = None
    strict: bool = False
    specialize_q: int | None = None
    output_format: str = field(default_factory=default_format)
    output: Path | None = None
    workers: int = field(default_factory=default_workers)
    guard: CostGuard = field(default_factory=guard_from_env)

    def __post_init__(self) -> None:
        """Validate ranges."""
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidInputError(
                f"Invalid output format: {self.output_format}. Must be one of: {', '.join(OUTPUT_FORMATS)}"
            )
        if self.workers < 1:
            raise InvalidInputError(f"Workers must be at least 1, got {self.workers}")
        for name in ("q", "specialize_q"):
            value = getattr(self, name)
            if value is not None and value < 2:
                raise InvalidInputError(f"{name} must be at least 2, got {value}")
        for name in ("d", "k", "n", "N", "dmax", "dim", "kmax", "alphabet", "cutoff"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise InvalidInputError(f"{name} must be non-negative, got {value}")
        if any(a < 1 for a in self.parts):
            raise InvalidInputError(f"Parts must be positive: {self.parts}")

    def require(self, *names: str) -> None:
        """Raise InvalidInputError if any named parameter is unset."""
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            flags = ", ".join(
                f"-{name}" if name in SHORT_FLAGS else f"--{name.replace('_', '-')}" for name in missing
            )
            raise InvalidInputError(f"{self.command} requires {flags}")
