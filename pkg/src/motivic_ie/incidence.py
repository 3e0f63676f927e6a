"""Incidence algebras of finite posets.

Coefficients only need +, -, * and equality, so integers, Fractions and
LPoly values all work. Missing pairs read as integer 0.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any

import numpy as np

from motivic_ie.errors import InvalidInputError
from motivic_ie.poset import FinitePoset, euler_characteristics, interval

logger = logging.getLogger(__name__)

Pair = tuple[str, str]


def comparable_pairs(p: FinitePoset) -> list[Pair]:
    """All pairs (a, b) with a <= b, in element order."""
    return [(p.elements[i], p.elements[j]) for i, j in zip(*np.nonzero(p.order), strict=True)]


@dataclass(frozen=True, eq=False)
class IncidenceElement:
    """A function on the comparable pairs of a poset."""

    poset: FinitePoset
    values: Mapping[Pair, Any]

    def __post_init__(self) -> None:
        """Reject values on incomparable or unknown pairs."""
        for a, b in self.values:
            if not self.poset.leq(a, b):
                raise InvalidInputError(f"Incidence value on non-comparable pair ({a}, {b})")
        object.__setattr__(self, "values", dict(self.values))

    def __call__(self, a: str, b: str) -> Any:
        return self.values.get((a, b), 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IncidenceElement):
            return NotImplemented
        if other.poset is not self.poset:
            return False
        return all(self(a, b) == other(a, b) for a, b in comparable_pairs(self.poset))

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: IncidenceElement) -> IncidenceElement:
        _check_same_poset(self, other)
        pairs = comparable_pairs(self.poset)
        return IncidenceElement(self.poset, {(a, b): self(a, b) + other(a, b) for a, b in pairs})

    def __matmul__(self, other: IncidenceElement) -> IncidenceElement:
        return convolve(self, other)

    def table(self) -> list[dict]:
        """Rows {"a", "b", "value"} for reports."""
        return [{"a": a, "b": b, "value": self(a, b)} for a, b in comparable_pairs(self.poset)]


def _check_same_poset(f: IncidenceElement, g: IncidenceElement) -> None:
    if f.poset is not g.poset:
        raise InvalidInputError("Incidence elements live on different posets")


def convolve(f: IncidenceElement, g: IncidenceElement) -> IncidenceElement:
    """(f * g)(a <= b) = sum over a <= x <= b of f(a <= x) g(x <= b).

    Raises:
        InvalidInputError: If f and g are defined on different posets.
    """
    _check_same_poset(f, g)
    p = f.poset
    values = {}
    for i, j in zip(*np.nonzero(p.order), strict=True):
        a, b = p.elements[i], p.elements[j]
        total: Any = 0
        for x in np.nonzero(p.order[i, :] & p.order[:, j])[0]:
            y = p.elements[x]
            total = total + f(a, y) * g(y, b)
        values[(a, b)] = total
    return IncidenceElement(p, values)


def zeta(p: FinitePoset, one: Any = 1) -> IncidenceElement:
    """The constant function one on every comparable pair."""
    return IncidenceElement(p, dict.fromkeys(comparable_pairs(p), one))


def delta(p: FinitePoset, one: Any = 1) -> IncidenceElement:
    """The convolution unit: one on the diagonal, zero elsewhere."""
    zero = one - one
    return IncidenceElement(p, {(a, b): one if a == b else zero for a, b in comparable_pairs(p)})


def _pairs_by_interval_size(p: FinitePoset) -> list[tuple[int, int]]:
    pairs = [(int(i), int(j)) for i, j in zip(*np.nonzero(p.order), strict=True)]
    counts = {(i, j): int((p.order[i, :] & p.order[:, j]).sum()) for i, j in pairs}
    return sorted(pairs, key=lambda pair: (counts[pair], pair))


def mobius_by_inversion(p: FinitePoset, one: Any = 1) -> IncidenceElement:
    """Mobius function by the recursion mu(a, b) = -sum_{a <= x < b} mu(a, x).

    Pairs are solved in increasing order of interval size, so every term on
    the right is already known.
    """
    zero = one - one
    mu: dict[tuple[int, int], Any] = {}
    for i, j in _pairs_by_interval_size(p):
        if i == j:
            mu[(i, j)] = one
            continue
        total = zero
        for x in np.nonzero(p.order[i, :] & p.order[:, j])[0]:
            if x != j:
                total = total + mu[(i, int(x))]
        mu[(i, j)] = -total
    return IncidenceElement(p, {(p.elements[i], p.elements[j]): v for (i, j), v in mu.items()})


def mobius_topological(p: FinitePoset) -> IncidenceElement:
    """Mobius function as reduced Euler characteristics of open intervals.

    mu(a, a) = 1 and mu(a, b) is the reduced Euler characteristic of the
    nerve of (a, b) for a < b; a covering pair gives the empty interval, -1.
    """
    intervals: dict[Pair, FinitePoset] = {}
    values = {}
    for a, b in comparable_pairs(p):
        if a == b:
            values[(a, b)] = 1
            continue
        if (a, b) not in intervals:
            intervals[(a, b)] = interval(p, a, b, open_low=True, open_high=True)
        values[(a, b)] = euler_characteristics(intervals[(a, b)])[1]
    logger.debug("Topological Mobius over %d intervals", len(intervals))
    return IncidenceElement(p, values)


@dataclass(frozen=True)
class MobiusComparison:
    """Pairwise comparison of the two Mobius computations."""

    inversion: IncidenceElement
    topological: IncidenceElement
    disagreements: list[Pair]

    @property
    def agree(self) -> bool:
        return not self.disagreements


def compare_mobius(p: FinitePoset) -> MobiusComparison:
    """Compute both Mobius functions and list the pairs where they differ."""
    by_inversion = mobius_by_inversion(p)
    topological = mobius_topological(p)
    disagreements = [
        (a, b) for a, b in comparable_pairs(p) if by_inversion(a, b) != topological(a, b)
    ]
    if disagreements:
        logger.warning("Mobius computations disagree on %d pairs", len(disagreements))
    return MobiusComparison(by_inversion, topological, disagreements)
