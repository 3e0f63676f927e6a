"""Finite posets, intervals, centers, retractions and nerves.

A FinitePoset stores its order as a dense boolean matrix. Posets may be
fibered over a finite base set (comparable elements share a base point) and
may carry a strictly increasing integer rank.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

import numpy as np

from motivic_ie.errors import InvalidInputError
from motivic_ie.guards import DEFAULT_GUARD
from motivic_ie.linalg import sign

logger = logging.getLogger(__name__)

# Reserved namespace for adjoined elements; user ids may not start with it
RESERVED_PREFIX = "@"
MINUS_INFINITY = "@-inf"
PLUS_INFINITY = "@+inf"


def transitive_closure(relation: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a square boolean matrix.

    Uses repeated squaring, so at most log2(n) + 1 products are taken.
    """
    n = relation.shape[0]
    closure = relation.astype(bool) | np.eye(n, dtype=bool)
    while True:
        as_int = closure.astype(np.int64)
        squared = (as_int @ as_int) > 0
        if np.array_equal(squared, closure):
            return closure
        closure = squared


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """A finite partially ordered set.

    Attributes:
        elements: Element ids in a fixed order; matrices are indexed by it.
        order: Boolean matrix with order[i, j] true iff elements[i] <= elements[j].
        base: Optional map element -> base point id.
        rank: Optional strictly increasing map element -> int.
    """

    elements: tuple[str, ...]
    order: np.ndarray
    base: Mapping[str, str] | None = None
    rank: Mapping[str, int] | None = None
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Validate the order axioms, fiberwise order and rank strictness."""
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        n = len(elements)
        DEFAULT_GUARD.check_poset_size(n)

        index = {x: i for i, x in enumerate(elements)}
        if len(index) != n:
            raise InvalidInputError("Poset element ids must be unique")
        for x in elements:
            if not isinstance(x, str) or not x:
                raise InvalidInputError(f"Poset element ids must be non-empty strings: {x!r}")
        object.__setattr__(self, "_index", index)

        order = np.asarray(self.order, dtype=bool)
        if order.shape != (n, n):
            raise InvalidInputError(f"Order matrix has shape {order.shape}, expected ({n}, {n})")
        order = order.copy()
        order.flags.writeable = False
        object.__setattr__(self, "order", order)

        if n:
            if not order.diagonal().all():
                raise InvalidInputError("Order relation is not reflexive")
            if (order & order.T & ~np.eye(n, dtype=bool)).any():
                i, j = map(int, np.argwhere(order & order.T & ~np.eye(n, dtype=bool))[0])
                raise InvalidInputError(
                    f"Order relation is not antisymmetric: {elements[i]} and {elements[j]}"
                )
            as_int = order.astype(np.int64)
            if ((as_int @ as_int > 0) & ~order).any():
                raise InvalidInputError("Order relation is not transitive")

        if self.base is not None:
            base = dict(self.base)
            missing = [x for x in elements if x not in base]
            if missing:
                raise InvalidInputError(f"Base map is missing elements: {missing}")
            for i, j in zip(*np.nonzero(order), strict=True):
                a, b = elements[i], elements[j]
                if base[a] != base[b]:
                    raise InvalidInputError(
                        f"Comparable elements {a} <= {b} lie over different base points"
                    )
            object.__setattr__(self, "base", {x: base[x] for x in elements})

        if self.rank is not None:
            rank = dict(self.rank)
            missing = [x for x in elements if x not in rank]
            if missing:
                raise InvalidInputError(f"Rank map is missing elements: {missing}")
            for i, j in zip(*np.nonzero(order), strict=True):
                if i != j and rank[elements[i]] >= rank[elements[j]]:
                    raise InvalidInputError(
                        f"Rank is not strictly increasing along {elements[i]} < {elements[j]}"
                    )
            object.__setattr__(self, "rank", {x: int(rank[x]) for x in elements})

    @classmethod
    def from_relations(
        cls,
        elements: Iterable[str],
        relations: Iterable[tuple[str, str]],
        base: Mapping[str, str] | None = None,
        rank: Mapping[str, int] | None = None,
    ) -> FinitePoset:
        """Build a poset from generating pairs (a, b) meaning a <= b.

        Covering pairs are enough; the reflexive-transitive closure is taken.

        Raises:
            InvalidInputError: If a pair names an unknown element or the
                closure is not antisymmetric.
        """
        elements = tuple(elements)
        index = {x: i for i, x in enumerate(elements)}
        relation = np.zeros((len(elements), len(elements)), dtype=bool)
        for a, b in relations:
            if a not in index or b not in index:
                unknown = a if a not in index else b
                raise InvalidInputError(f"Unknown element in relation: {unknown}")
            relation[index[a], index[b]] = True
        return cls(elements, transitive_closure(relation), base=base, rank=rank)

    @classmethod
    def from_dict(cls, data: Mapping) -> FinitePoset:
        """Create a poset from its file representation."""
        try:
            elements = [str(x) for x in data["elements"]]
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f"Poset data needs an 'elements' list: {e}") from e
        reserved = [x for x in elements if x.startswith(RESERVED_PREFIX)]
        if reserved:
            raise InvalidInputError(f"Element ids may not start with '{RESERVED_PREFIX}': {reserved}")
        pairs = []
        for pair in data.get("leq", []) or []:
            if len(pair) != 2:
                raise InvalidInputError(f"Relation entries must be pairs: {pair}")
            pairs.append((str(pair[0]), str(pair[1])))
        rank = data.get("rank")
        base = data.get("base")
        poset = cls.from_relations(
            elements,
            pairs,
            base={str(k): str(v) for k, v in base.items()} if base else None,
            rank={str(k): int(v) for k, v in rank.items()} if rank else None,
        )
        given = {(a, b) for a, b in pairs if a != b}
        implied = int(poset.order.sum()) - len(poset) - len(given)
        if implied > 0:
            logger.warning(
                "Relation list is not transitively closed; closure added %d pairs", implied
            )
        return poset

    def to_dict(self) -> dict:
        """Convert to the file representation, listing covering pairs only."""
        data: dict = {
            "elements": list(self.elements),
            "leq": [[a, b] for a, b in self.covers()],
        }
        if self.rank is not None:
            data["rank"] = dict(self.rank)
        if self.base is not None:
            data["base"] = dict(self.base)
        return data

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._index

    def __repr__(self) -> str:
        return f"FinitePoset({len(self)} elements, ranked={self.is_ranked})"

    @property
    def is_ranked(self) -> bool:
        return self.rank is not None

    def index(self, x: str) -> int:
        """Return the position of an element, raising on unknown ids."""
        try:
            return self._index[x]
        except KeyError:
            raise InvalidInputError(f"Unknown element: {x}") from None

    def leq(self, a: str, b: str) -> bool:
        return bool(self.order[self.index(a), self.index(b)])

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a: str, b: str) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def strictly_below(self, x: str) -> list[str]:
        """Elements strictly below x, in element order."""
        i = self.index(x)
        return [self.elements[j] for j in np.nonzero(self.order[:, i])[0] if j != i]

    def strictly_above(self, x: str) -> list[str]:
        """Elements strictly above x, in element order."""
        i = self.index(x)
        return [self.elements[j] for j in np.nonzero(self.order[i, :])[0] if j != i]

    def covers(self) -> list[tuple[str, str]]:
        """Covering pairs (a, b): a < b with nothing strictly between."""
        n = len(self)
        strict = self.order & ~np.eye(n, dtype=bool)
        as_int = strict.astype(np.int64)
        between = (as_int @ as_int) > 0
        cover = strict & ~between
        return [(self.elements[i], self.elements[j]) for i, j in zip(*np.nonzero(cover), strict=True)]

    def linear_extension(self) -> list[int]:
        """Indices sorted so that every element comes after everything below it."""
        down_sizes = self.order.sum(axis=0)
        return sorted(range(len(self)), key=lambda i: (int(down_sizes[i]), i))

    def lower_indices(self) -> list[list[int]]:
        """For each index, the indices strictly below it."""
        n = len(self)
        return [[j for j in np.nonzero(self.order[:, i])[0].tolist() if j != i] for i in range(n)]

    def induced(self, ids: Iterable[str]) -> FinitePoset:
        """Induced sub-poset on the given ids, kept in this poset's order."""
        wanted = set(ids)
        for x in wanted:
            self.index(x)
        keep = [i for i, x in enumerate(self.elements) if x in wanted]
        elements = tuple(self.elements[i] for i in keep)
        order = self.order[np.ix_(keep, keep)] if keep else np.zeros((0, 0), dtype=bool)
        base = {x: self.base[x] for x in elements} if self.base is not None else None
        rank = {x: self.rank[x] for x in elements} if self.rank is not None else None
        return FinitePoset(elements, order, base=base, rank=rank)

    def fibers(self) -> dict[str, list[str]]:
        """Group elements by base point; an unfibered poset is one fiber ''."""
        if self.base is None:
            return {"": list(self.elements)}
        groups: dict[str, list[str]] = {}
        for x in self.elements:
            groups.setdefault(self.base[x], []).append(x)
        return dict(sorted(groups.items()))

    def is_induced_subposet_of(self, other: FinitePoset) -> bool:
        """Check that this poset is an induced sub-poset of other."""
        if any(x not in other for x in self.elements):
            return False
        keep = [other.index(x) for x in self.elements]
        return bool(np.array_equal(other.order[np.ix_(keep, keep)], self.order)) if keep else True


@dataclass(frozen=True)
class NerveComplex:
    """Nondegenerate simplices of a nerve: strict chains grouped by dimension."""

    simplices: dict[int, tuple[tuple[str, ...], ...]]

    @property
    def dimension(self) -> int:
        """Top dimension, or -1 for the empty nerve."""
        return max((k for k, chains in self.simplices.items() if chains), default=-1)

    def count(self, k: int) -> int:
        return len(self.simplices.get(k, ()))

    def counts(self) -> dict[int, int]:
        return {k: len(chains) for k, chains in sorted(self.simplices.items()) if chains}

    def euler_characteristic(self) -> int:
        return sum(sign(k) * len(chains) for k, chains in self.simplices.items())


def _bound_mask(p: FinitePoset, x: str, below: bool, open_: bool) -> np.ndarray:
    i = p.index(x)
    mask = p.order[:, i].copy() if below else p.order[i, :].copy()
    if open_:
        mask[i] = False
    return mask


def interval(
    p: FinitePoset,
    a: str = MINUS_INFINITY,
    b: str = PLUS_INFINITY,
    open_low: bool = True,
    open_high: bool = True,
) -> FinitePoset:
    """Sub-poset of elements between a and b, with the induced order.

    Args:
        p: The ambient poset.
        a: Lower endpoint, or MINUS_INFINITY for no lower bound.
        b: Upper endpoint, or PLUS_INFINITY for no upper bound.
        open_low: Exclude a itself.
        open_high: Exclude b itself.

    Raises:
        InvalidInputError: If an endpoint is neither an element nor a sentinel.
    """
    mask = np.ones(len(p), dtype=bool)
    if a in p:
        mask &= _bound_mask(p, a, below=False, open_=open_low)
    elif a != MINUS_INFINITY:
        raise InvalidInputError(f"Unknown element: {a}")
    if b in p:
        mask &= _bound_mask(p, b, below=True, open_=open_high)
    elif b != PLUS_INFINITY:
        raise InvalidInputError(f"Unknown element: {b}")
    return p.induced(p.elements[i] for i in np.nonzero(mask)[0])


def _least(p: FinitePoset, mask: np.ndarray) -> str | None:
    found = [p.elements[i] for i in np.nonzero(mask)[0]]
    return min(found) if found else None


def find_center(p: FinitePoset) -> str | None:
    """Lexicographically least element comparable to every element, if any.

    The base map is ignored; see fiber_centers for per-fiber centers.
    """
    comparable = p.order | p.order.T
    return _least(p, comparable.all(axis=1))


def find_maximum(p: FinitePoset) -> str | None:
    """The element above every element, if any."""
    return _least(p, p.order.all(axis=0))


def find_minimum(p: FinitePoset) -> str | None:
    """The element below every element, if any."""
    return _least(p, p.order.all(axis=1))


@dataclass(frozen=True)
class FiberCenters:
    """Centers found per base point, and the base points that have none."""

    centers: dict[str, str]
    missing: list[str]

    @property
    def complete(self) -> bool:
        return not self.missing


def fiber_centers(p: FinitePoset) -> FiberCenters:
    """Find one center per fiber of a fibered poset."""
    centers: dict[str, str] = {}
    missing: list[str] = []
    for point, ids in p.fibers().items():
        center = find_center(p.induced(ids))
        if center is None:
            missing.append(point)
        else:
            centers[point] = center
    return FiberCenters(centers=centers, missing=missing)


def _as_subposet(p: FinitePoset, sub: FinitePoset | Iterable[str]) -> FinitePoset:
    if isinstance(sub, FinitePoset):
        if not sub.is_induced_subposet_of(p):
            raise InvalidInputError("Retraction target is not an induced sub-poset")
        return sub
    return p.induced(sub)


def _retraction(p: FinitePoset, sub: FinitePoset, falling: bool) -> dict[str, str] | None:
    keep = np.array([x in sub for x in p.elements], dtype=bool)
    retraction: dict[str, str] = {}
    for j, t in enumerate(p.elements):
        # candidates s in sub with s <= t (falling) or s >= t (rising)
        candidates = keep & (p.order[:, j] if falling else p.order[j, :])
        indices = np.nonzero(candidates)[0]
        if not len(indices):
            return None
        block = p.order[np.ix_(indices, indices)]
        # the maximum (falling) or minimum (rising) of the candidate set
        extreme = block.all(axis=0) if falling else block.all(axis=1)
        hits = indices[extreme]
        if not len(hits):
            return None
        retraction[t] = p.elements[int(hits[0])]
    return retraction


def falling_retraction(p: FinitePoset, sub: FinitePoset | Iterable[str]) -> dict[str, str] | None:
    """Order-preserving retraction r onto sub with r(t) <= t, if one exists.

    Exists iff every {s in sub : s <= t} has a maximum; r(t) is that maximum.
    """
    result = _retraction(p, _as_subposet(p, sub), falling=True)
    logger.debug("Falling retraction %s", "found" if result is not None else "absent")
    return result


def rising_retraction(p: FinitePoset, sub: FinitePoset | Iterable[str]) -> dict[str, str] | None:
    """Order-preserving retraction r onto sub with r(t) >= t, if one exists."""
    return _retraction(p, _as_subposet(p, sub), falling=False)


def nerve(p: FinitePoset, max_dim: int | None = None) -> NerveComplex:
    """Enumerate strict chains a_0 < ... < a_k, grouped by k.

    Chains are listed in lexicographic order of element positions.
    """
    n = len(p)
    above = [[j for j in np.nonzero(p.order[i, :])[0].tolist() if j != i] for i in range(n)]
    by_dim: dict[int, list[tuple[int, ...]]] = {}

    def extend(chain: tuple[int, ...]) -> None:
        k = len(chain) - 1
        by_dim.setdefault(k, []).append(chain)
        if max_dim is not None and k >= max_dim:
            return
        for j in above[chain[-1]]:
            extend((*chain, j))

    for i in range(n):
        extend((i,))

    simplices = {
        k: tuple(tuple(p.elements[i] for i in chain) for chain in sorted(chains))
        for k, chains in sorted(by_dim.items())
    }
    logger.debug("Nerve of %d elements: %s", n, {k: len(v) for k, v in simplices.items()})
    return NerveComplex(simplices=simplices)


def chain_counts(p: FinitePoset) -> dict[int, int]:
    """Number of strict chains with k + 1 elements, for each k, without listing them."""
    below = p.lower_indices()
    ending: dict[int, list[int]] = {}
    totals: dict[int, int] = {}
    for i in p.linear_extension():
        counts = [1]
        for j in below[i]:
            for length, c in enumerate(ending[j]):
                if length + 1 >= len(counts):
                    counts.extend([0] * (length + 2 - len(counts)))
                counts[length + 1] += c
        ending[i] = counts
        for k, c in enumerate(counts):
            totals[k] = totals.get(k, 0) + c
    return dict(sorted(totals.items()))


def euler_characteristics(p: FinitePoset) -> tuple[int, int]:
    """Return (chi, chi_reduced) of the nerve.

    chi is the alternating count of strict chains, computed by the recursion
    g(x) = 1 - sum of g(y) over y < x; chi_reduced = chi - 1, so the empty
    poset gives (0, -1).
    """
    below = p.lower_indices()
    g: dict[int, int] = {}
    for i in p.linear_extension():
        g[i] = 1 - sum(g[j] for j in below[i])
    chi = sum(g.values())
    return chi, chi - 1


@dataclass(frozen=True)
class FiberedEuler:
    """Euler characteristics of the nerve of each fiber."""

    per_fiber: dict[str, int]
    total: int
    fiber_count: int


def fibered_euler(p: FinitePoset) -> FiberedEuler:
    """Euler characteristic of each fiber's nerve and their sum.

    When every fiber has a center, each fiber contributes 1 and the total
    equals the number of base points.
    """
    per_fiber = {point: euler_characteristics(p.induced(ids))[0] for point, ids in p.fibers().items()}
    return FiberedEuler(per_fiber=per_fiber, total=sum(per_fiber.values()), fiber_count=len(per_fiber))
