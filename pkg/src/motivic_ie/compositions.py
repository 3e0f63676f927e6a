"""Compositions of integers (ordered tuples of positive parts)."""

from __future__ import annotations

from collections.abc import Iterator
from itertools import combinations


def compositions(total: int) -> Iterator[tuple[int, ...]]:
    """All compositions of total, in lexicographic order.

    A composition of n with m parts corresponds to a choice of m - 1 cut
    points among 1, ..., n - 1.
    """
    if total < 0:
        return
    if total == 0:
        yield ()
        return
    found = []
    for cuts in range(total):
        for points in combinations(range(1, total), cuts):
            edges = (0, *points, total)
            found.append(tuple(b - a for a, b in zip(edges, edges[1:], strict=False)))
    yield from sorted(found)


def graded_compositions(cutoff: int, parts: int | None = None) -> list[tuple[int, ...]]:
    """Compositions with sum in 1..cutoff, graded by sum then lexicographic.

    Args:
        cutoff: Largest allowed sum.
        parts: If given, keep only compositions with exactly this many parts.
    """
    result = []
    for total in range(1, cutoff + 1):
        for composition in compositions(total):
            if parts is None or len(composition) == parts:
                result.append(composition)
    return result
