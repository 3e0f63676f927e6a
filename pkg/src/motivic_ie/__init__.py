"""Exact motivic and categorified inclusion-exclusion at desk scale.

- finite poset topology: nerves, centers, retractions, Mobius functions
- filtered complexes over Q and their spectral sequences
- Kapranov zeta functions of cellular varieties and their inverses
- sign-isotypic graded cohomology and stable Betti tables
- brute-force finite-field oracles for every identity above
"""

from motivic_ie.cohom import GradedWeightedSpace, stable_homology_table
from motivic_ie.errors import CostGuardError, InvalidInputError, MotivicIEError, VerificationError
from motivic_ie.guards import CostGuard
from motivic_ie.homology import betti, nerve_betti, rank_e1_report, spectral_sequence
from motivic_ie.incidence import compare_mobius, mobius_by_inversion, mobius_topological
from motivic_ie.motivic import (
    CellularVariety,
    LPoly,
    MotSeries,
    config_gf,
    invert,
    kapranov_zeta,
    stable_limit,
)
from motivic_ie.poset import FinitePoset, falling_retraction, find_center, nerve

__version__ = "0.1.0"

__all__ = [
    "CellularVariety",
    "CostGuard",
    "CostGuardError",
    "FinitePoset",
    "GradedWeightedSpace",
    "InvalidInputError",
    "LPoly",
    "MotSeries",
    "MotivicIEError",
    "VerificationError",
    "betti",
    "compare_mobius",
    "config_gf",
    "falling_retraction",
    "find_center",
    "invert",
    "kapranov_zeta",
    "mobius_by_inversion",
    "mobius_topological",
    "nerve",
    "nerve_betti",
    "rank_e1_report",
    "spectral_sequence",
    "stable_homology_table",
    "stable_limit",
]
