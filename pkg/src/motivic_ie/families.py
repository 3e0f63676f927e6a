"""Builders for the standard poset families."""

from __future__ import annotations

import logging
from collections.abc import Callable, Mapping, Sequence
from itertools import combinations, combinations_with_replacement

import numpy as np
from sympy import divisors as sympy_divisors
from sympy import factorint

from motivic_ie.errors import InvalidInputError
from motivic_ie.poset import (
    MINUS_INFINITY,
    PLUS_INFINITY,
    FinitePoset,
    nerve,
    transitive_closure,
)

logger = logging.getLogger(__name__)

Multiset = tuple[str, ...]


def multiset_label(items: Sequence[str]) -> str:
    """Label a multiset (or set) given as a sorted tuple of letters."""
    return "{" + ",".join(items) + "}"


def parse_multiset_label(label: str) -> Multiset:
    """Inverse of multiset_label."""
    if not (label.startswith("{") and label.endswith("}")):
        raise InvalidInputError(f"Not a multiset label: {label}")
    return tuple(label[1:-1].split(",")) if len(label) > 2 else ()


def _is_submultiset(small: Multiset, big: Multiset) -> bool:
    remaining = list(big)
    for letter in small:
        if letter not in remaining:
            return False
        remaining.remove(letter)
    return True


def _from_order_function(
    items: Sequence,
    labels: Sequence[str],
    leq: Callable[[object, object], bool],
    rank: Sequence[int] | None = None,
) -> FinitePoset:
    n = len(items)
    order = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(items):
        for j, b in enumerate(items):
            order[i, j] = leq(a, b)
    return FinitePoset(
        tuple(labels),
        order,
        rank=dict(zip(labels, rank, strict=True)) if rank is not None else None,
    )


def validate_alphabet(letters: Sequence[str]) -> list[str]:
    letters = [str(x) for x in letters]
    if not letters:
        raise InvalidInputError("Alphabet must be non-empty")
    if len(set(letters)) != len(letters):
        raise InvalidInputError(f"Alphabet has repeated letters: {letters}")
    for letter in letters:
        if not letter or any(c in letter for c in "{},@:[]|"):
            raise InvalidInputError(f"Invalid letter: {letter!r}")
    return letters


def chain(n: int) -> FinitePoset:
    """Total order 0 < 1 < ... < n-1, ranked by position."""
    if n < 0:
        raise InvalidInputError("Chain length must be non-negative")
    labels = [str(i) for i in range(n)]
    return _from_order_function(range(n), labels, lambda a, b: a <= b, rank=list(range(n)))


def antichain(m: int) -> FinitePoset:
    """m pairwise incomparable elements a0, ..., a{m-1}, all of rank 0."""
    if m < 0:
        raise InvalidInputError("Antichain size must be non-negative")
    labels = [f"a{i}" for i in range(m)]
    return _from_order_function(range(m), labels, lambda a, b: a == b, rank=[0] * m)


def boolean(n: int, include_empty: bool = True) -> FinitePoset:
    """Subsets of {1, ..., n} under inclusion, ranked by size."""
    if n < 0:
        raise InvalidInputError("Boolean lattice size must be non-negative")
    ground = [str(i) for i in range(1, n + 1)]
    start = 0 if include_empty else 1
    subsets = [c for size in range(start, n + 1) for c in combinations(ground, size)]
    return _from_order_function(
        subsets,
        [multiset_label(s) for s in subsets],
        lambda a, b: set(a) <= set(b),
        rank=[len(s) for s in subsets],
    )


def divisor_poset(n: int) -> FinitePoset:
    """Divisors of n under divisibility, ranked by number of prime factors."""
    if n < 1:
        raise InvalidInputError("Divisor poset needs a positive integer")
    divs = [int(d) for d in sympy_divisors(n)]
    return _from_order_function(
        divs,
        [str(d) for d in divs],
        lambda a, b: b % a == 0,
        rank=[sum(factorint(d).values()) for d in divs],
    )


def configuration(letters: Sequence[str], k: int | None = None) -> FinitePoset:
    """Non-empty subsets of the alphabet of size at most k, ranked by size."""
    letters = validate_alphabet(letters)
    k = len(letters) if k is None else k
    if k < 1:
        raise InvalidInputError("Cutoff must be at least 1")
    subsets = [c for size in range(1, min(k, len(letters)) + 1) for c in combinations(letters, size)]
    return _from_order_function(
        subsets,
        [multiset_label(s) for s in subsets],
        lambda a, b: set(a) <= set(b),
        rank=[len(s) for s in subsets],
    )


def symmetric(letters: Sequence[str], k: int, bottom: bool = False) -> FinitePoset:
    """Non-empty multisets over the alphabet of size at most k, ranked by size.

    Multisets are ordered by inclusion with multiplicity. With bottom=True the
    minimum MINUS_INFINITY is adjoined.
    """
    letters = validate_alphabet(letters)
    if k < 1:
        raise InvalidInputError("Cutoff must be at least 1")
    multisets = [c for size in range(1, k + 1) for c in combinations_with_replacement(letters, size)]
    poset = _from_order_function(
        multisets,
        [multiset_label(s) for s in multisets],
        _is_submultiset,
        rank=[len(s) for s in multisets],
    )
    return cone(poset) if bottom else poset


def support_map(p: FinitePoset) -> dict[str, str]:
    """Send each multiset label to the label of its support set."""
    result = {}
    for x in p.elements:
        if not x.startswith("{"):
            result[x] = x
            continue
        result[x] = multiset_label(list(dict.fromkeys(parse_multiset_label(x))))
    return result


def barycentric(p: FinitePoset) -> FinitePoset:
    """Poset of non-empty strict chains of p ordered by inclusion."""
    chains = [c for simplices in nerve(p).simplices.values() for c in simplices]
    return _from_order_function(
        chains,
        ["[" + "|".join(c) + "]" for c in chains],
        lambda a, b: set(a) <= set(b),
        rank=[len(c) for c in chains],
    )


def _prefixed(p: FinitePoset, prefix: str) -> list[str]:
    return [f"{prefix}:{x}" for x in p.elements]


def join(a: FinitePoset, b: FinitePoset) -> FinitePoset:
    """Disjoint union with every element of a placed below every element of b."""
    n, m = len(a), len(b)
    order = np.zeros((n + m, n + m), dtype=bool)
    order[:n, :n] = a.order
    order[n:, n:] = b.order
    order[:n, n:] = True
    labels = _prefixed(a, "a") + _prefixed(b, "b")
    rank = None
    if a.is_ranked and b.is_ranked:
        top = max(a.rank.values(), default=0)
        low = min(b.rank.values(), default=0)
        shift = top - low + 1
        rank = {f"a:{x}": r for x, r in a.rank.items()}
        rank.update({f"b:{x}": r + shift for x, r in b.rank.items()})
    return FinitePoset(tuple(labels), order, rank=rank)


def _adjoin(p: FinitePoset, label: str, as_minimum: bool) -> FinitePoset:
    if p.base is not None:
        raise InvalidInputError("Adjoin extremal elements fiber by fiber on fibered posets")
    if label in p:
        raise InvalidInputError(f"Poset already contains {label}")
    n = len(p)
    order = np.zeros((n + 1, n + 1), dtype=bool)
    if as_minimum:
        order[0, :] = True
        order[1:, 1:] = p.order
        elements = (label, *p.elements)
    else:
        order[:n, :n] = p.order
        order[:, n] = True
        elements = (*p.elements, label)
    rank = None
    if p.is_ranked:
        rank = dict(p.rank)
        values = rank.values()
        rank[label] = (min(values, default=1) - 1) if as_minimum else (max(values, default=-1) + 1)
    return FinitePoset(elements, order, rank=rank)


def cone(p: FinitePoset) -> FinitePoset:
    """Adjoin a minimum MINUS_INFINITY."""
    return _adjoin(p, MINUS_INFINITY, as_minimum=True)


def cocone(p: FinitePoset) -> FinitePoset:
    """Adjoin a maximum PLUS_INFINITY."""
    return _adjoin(p, PLUS_INFINITY, as_minimum=False)


def disjoint_union(parts: Mapping[str, FinitePoset]) -> FinitePoset:
    """Fibered disjoint union: element label:x lies over base point label."""
    labels: list[str] = []
    base: dict[str, str] = {}
    rank: dict[str, int] | None = {}
    blocks = []
    for name, part in parts.items():
        ids = _prefixed(part, name)
        labels.extend(ids)
        base.update({x: name for x in ids})
        blocks.append(part.order)
        if rank is not None and part.is_ranked:
            rank.update({f"{name}:{x}": r for x, r in part.rank.items()})
        else:
            rank = None
    total = len(labels)
    order = np.zeros((total, total), dtype=bool)
    offset = 0
    for block in blocks:
        size = block.shape[0]
        order[offset : offset + size, offset : offset + size] = block
        offset += size
    return FinitePoset(tuple(labels), order, base=base, rank=rank)


def random_poset(n: int, edge_probability: float = 0.3, seed: int = 0, ranked: bool = False) -> FinitePoset:
    """Seeded random poset: transitive closure of a random DAG on v0..v{n-1}.

    Each pair i < j gets the edge vi -> vj with the given probability. With
    ranked=True the rank of an element is the length of the longest chain
    below it.
    """
    if n < 0 or not 0.0 <= edge_probability <= 1.0:
        raise InvalidInputError("Random poset needs n >= 0 and 0 <= edge_probability <= 1")
    rng = np.random.default_rng(seed)
    draws = rng.random((n, n))
    relation = np.triu(draws < edge_probability, k=1)
    order = transitive_closure(relation)
    labels = tuple(f"v{i}" for i in range(n))
    rank = None
    if ranked:
        heights = [0] * n
        for j in range(n):
            below = [i for i in range(j) if order[i, j]]
            heights[j] = max((heights[i] + 1 for i in below), default=0)
        rank = dict(zip(labels, heights, strict=True))
    return FinitePoset(labels, order, rank=rank)


FAMILIES: dict[str, Callable[..., FinitePoset]] = {
    "chain": chain,
    "antichain": antichain,
    "boolean": boolean,
    "divisors": divisor_poset,
    "configuration": configuration,
    "symmetric": symmetric,
    "barycentric": barycentric,
    "join": join,
    "cone": cone,
    "cocone": cocone,
    "disjoint_union": disjoint_union,
    "random": random_poset,
}


def _resolve(value: object) -> object:
    """Build nested {"family": name, ...} parameters into posets."""
    if isinstance(value, Mapping):
        if "family" in value:
            nested = {k: v for k, v in value.items() if k != "family"}
            return build_family(value["family"], nested)
        return {k: _resolve(v) for k, v in value.items()}
    return value


def build_family(name: str, params: Mapping | None = None) -> FinitePoset:
    """Construct a named poset family.

    Poset-valued parameters (cone, join, barycentric, disjoint_union) are
    given as mappings with a "family" key, e.g. {"family": "boolean", "n": 2}.

    Args:
        name: One of FAMILIES.
        params: Keyword parameters for the builder.

    Raises:
        InvalidInputError: Unknown family or parameters it does not accept.
    """
    try:
        builder = FAMILIES[name]
    except KeyError:
        raise InvalidInputError(
            f"Unknown poset family: {name}. Known: {', '.join(sorted(FAMILIES))}"
        ) from None
    try:
        poset = builder(**{k: _resolve(v) for k, v in (params or {}).items()})
    except InvalidInputError:
        raise
    except (TypeError, ValueError, AttributeError) as e:
        raise InvalidInputError(f"Invalid parameters for family {name}: {e}") from e
    logger.info("Built %s poset with %d elements", name, len(poset))
    return poset
