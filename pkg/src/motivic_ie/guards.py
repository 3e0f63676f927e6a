"""Cost guards for enumeration and matrix sizes."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from motivic_ie.errors import CostGuardError, InvalidInputError

logger = logging.getLogger(__name__)

# Dense order matrices are kept below this many elements
MAX_POSET_ELEMENTS = 512

# Exhaustive finite-field enumeration bound (number of coefficient vectors)
MAX_ENUMERATION = 10**8

# Estimated dense footprint of a single boundary matrix, 8 bytes per entry
MAX_MATRIX_BYTES = 2 * 1024**3

# Highest t-degree for the colored-configuration inversion check
MAX_VW_DEGREE = 6

BYTES_PER_ENTRY = 8


@dataclass(frozen=True)
class CostGuard:
    """Limits applied before an expensive computation starts.

    Every check raises CostGuardError instead of truncating the work.
    """

    max_poset_elements: int = MAX_POSET_ELEMENTS
    max_enumeration: int = MAX_ENUMERATION
    max_matrix_bytes: int = MAX_MATRIX_BYTES
    max_vw_degree: int = MAX_VW_DEGREE

    def __post_init__(self) -> None:
        for name in (
            "max_poset_elements",
            "max_enumeration",
            "max_matrix_bytes",
            "max_vw_degree",
        ):
            if getattr(self, name) < 0:
                raise InvalidInputError(f"{name} must be non-negative")

    def check_poset_size(self, size: int) -> None:
        """Refuse posets too large for a dense order matrix."""
        if size > self.max_poset_elements:
            raise CostGuardError(
                f"Poset has {size} elements; limit is {self.max_poset_elements}"
            )

    def check_enumeration(self, count: int, what: str = "enumeration") -> None:
        """Refuse exhaustive enumerations over the configured bound."""
        if count > self.max_enumeration:
            raise CostGuardError(
                f"{what} would visit {count} items; limit is {self.max_enumeration}"
            )
        logger.debug("%s: %d items within guard", what, count)

    def check_matrix(self, rows: int, cols: int, what: str = "matrix") -> None:
        """Refuse matrices whose dense footprint exceeds the byte guard."""
        footprint = rows * cols * BYTES_PER_ENTRY
        if footprint > self.max_matrix_bytes:
            raise CostGuardError(
                f"{what} of shape {rows}x{cols} needs ~{footprint} bytes; "
                f"limit is {self.max_matrix_bytes}"
            )

    def check_vw_degree(self, degree: int) -> None:
        """Refuse colored-configuration inversions beyond the degree bound."""
        if degree > self.max_vw_degree:
            raise CostGuardError(
                f"Inversion degree {degree} exceeds limit {self.max_vw_degree}"
            )


DEFAULT_GUARD = CostGuard()
