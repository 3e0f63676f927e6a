"""Pytest fixtures for motivic_ie tests."""

from __future__ import annotations

import json
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING

import pytest
import yaml

from motivic_ie import families
from motivic_ie.guards import CostGuard
from motivic_ie.motivic import CellularVariety, projective_space
from motivic_ie.poset import FinitePoset

if TYPE_CHECKING:
    from collections.abc import Generator

# Diamond: bottom < left, right < top
DIAMOND = {
    "elements": ["bottom", "left", "right", "top"],
    "leq": [["bottom", "left"], ["bottom", "right"], ["left", "top"], ["right", "top"]],
    "rank": {"bottom": 0, "left": 1, "right": 1, "top": 2},
}


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def diamond() -> FinitePoset:
    """The four-element diamond lattice, ranked."""
    return FinitePoset.from_dict(DIAMOND)


@pytest.fixture
def configuration_poset() -> FinitePoset:
    """Non-empty subsets of {0, 1, 2}."""
    return families.configuration(["0", "1", "2"])


@pytest.fixture
def poset_file(temp_dir: Path) -> Path:
    """Diamond written as YAML."""
    file_path = temp_dir / "diamond.yaml"
    with open(file_path, "w", encoding="utf-8") as f:
        yaml.safe_dump(DIAMOND, f)
    return file_path


@pytest.fixture
def p1() -> CellularVariety:
    return projective_space(1)


@pytest.fixture
def p1_file(temp_dir: Path) -> Path:
    """P^1 as a cellular variety JSON file."""
    file_path = temp_dir / "p1.json"
    file_path.write_text(json.dumps({"type": "cellular", "cells": [0, 1]}))
    return file_path


@pytest.fixture
def p1_cohomology_file(temp_dir: Path) -> Path:
    """Cohomology table of P^1, weights inferred."""
    file_path = temp_dir / "p1_cohomology.json"
    file_path.write_text(json.dumps({"pure": True, "dims": {"0": 1, "2": 1}}))
    return file_path


@pytest.fixture
def small_guard() -> CostGuard:
    """A guard tight enough to trip on modest inputs."""
    return CostGuard(max_enumeration=1000, max_matrix_bytes=8 * 400)
