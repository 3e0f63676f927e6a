"""Bigraded (degree, weight) dimension tables and their Koszul-rule powers.

A table records dim H^{degree} in each weight. Even-degree classes commute
and odd-degree classes anticommute, so the graded exterior power is an
exterior power of the even part tensored with a symmetric power of the odd
part, and the graded symmetric power is the other way around.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import comb

from motivic_ie import linalg
from motivic_ie.errors import InvalidInputError
from motivic_ie.homology import ChainComplexQ, betti
from motivic_ie.motivic import CellularVariety, LPoly

logger = logging.getLogger(__name__)

Bidegree = tuple[int, int]
BasisVector = tuple[int, int, int]


def _parse_bidegree(key: object, pure: bool) -> Bidegree:
    text = str(key)
    try:
        if "," in text:
            degree, weight = (int(part) for part in text.split(","))
            return degree, weight
        degree = int(text)
    except ValueError as e:
        raise InvalidInputError(f"Invalid bidegree key: {key!r}") from e
    if not pure:
        raise InvalidInputError(f"Key {key!r} needs an explicit weight unless the table is pure")
    return degree, degree


@dataclass(frozen=True)
class GradedWeightedSpace:
    """Finite table (degree, weight) -> dimension.

    Attributes:
        dims: Non-zero dimensions by bidegree.
        pure: Every class has weight equal to its degree.
        virtual: Negative entries are allowed (formal differences).
    """

    dims: Mapping[Bidegree, int]
    pure: bool = False
    virtual: bool = False

    def __post_init__(self) -> None:
        """Drop zeros and enforce non-negativity and purity."""
        cleaned = {(int(d), int(w)): int(n) for (d, w), n in self.dims.items() if n}
        if not self.virtual:
            negative = {b: n for b, n in cleaned.items() if n < 0}
            if negative:
                raise InvalidInputError(f"Negative dimensions in a non-virtual table: {negative}")
        if self.pure:
            impure = [b for b in cleaned if b[0] != b[1]]
            if impure:
                raise InvalidInputError(f"Table flagged pure has weight != degree at {impure}")
        object.__setattr__(self, "dims", dict(sorted(cleaned.items())))

    @classmethod
    def unit(cls) -> GradedWeightedSpace:
        return cls({(0, 0): 1}, pure=True)

    @classmethod
    def zero(cls) -> GradedWeightedSpace:
        return cls({}, pure=True)

    @classmethod
    def from_cohomology(cls, by_degree: Mapping[int, int]) -> GradedWeightedSpace:
        """Pure table from Betti numbers by degree."""
        return cls({(d, d): n for d, n in by_degree.items()}, pure=True)

    @classmethod
    def from_dict(cls, data: Mapping) -> GradedWeightedSpace:
        """Parse {"pure": bool, "dims": {"degree" or "degree,weight": n}}."""
        if "dims" not in data:
            raise InvalidInputError("Cohomology table needs a 'dims' mapping")
        if "pure" not in data:
            logger.warning("Cohomology table has no 'pure' flag; treating it as pure")
        pure = bool(data.get("pure", True))
        dims: dict[Bidegree, int] = {}
        for key, n in dict(data["dims"]).items():
            bidegree = _parse_bidegree(key, pure)
            dims[bidegree] = dims.get(bidegree, 0) + int(n)
        return cls(dims, pure=pure)

    def to_dict(self) -> dict:
        return {
            "pure": self.pure,
            "dims": {f"{d},{w}": n for (d, w), n in self.dims.items()},
        }

    def dim(self, degree: int, weight: int) -> int:
        return self.dims.get((degree, weight), 0)

    @property
    def total_dimension(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    def basis(self) -> list[BasisVector]:
        """One vector (degree, weight, copy) per dimension, sorted."""
        return [(d, w, i) for (d, w), n in self.dims.items() for i in range(n)]

    def even_basis(self) -> list[BasisVector]:
        return [v for v in self.basis() if v[0] % 2 == 0]

    def odd_basis(self) -> list[BasisVector]:
        return [v for v in self.basis() if v[0] % 2]

    def shift(self, degree: int = 0, weight: int = 0) -> GradedWeightedSpace:
        return GradedWeightedSpace(
            {(d + degree, w + weight): n for (d, w), n in self.dims.items()},
            pure=self.pure and degree == weight,
            virtual=self.virtual,
        )

    def dual(self) -> GradedWeightedSpace:
        """Transpose (degree, weight) -> (-degree, -weight)."""
        return GradedWeightedSpace(
            {(-d, -w): n for (d, w), n in self.dims.items()}, pure=self.pure, virtual=self.virtual
        )

    def parity_flip(self) -> GradedWeightedSpace:
        """Raise every degree by one, keeping weights."""
        return GradedWeightedSpace(
            {(d + 1, w): n for (d, w), n in self.dims.items()}, virtual=self.virtual
        )

    def scale(self, factor: int) -> GradedWeightedSpace:
        return GradedWeightedSpace(
            {b: n * factor for b, n in self.dims.items()},
            pure=self.pure,
            virtual=self.virtual or factor < 0,
        )

    def __add__(self, other: GradedWeightedSpace) -> GradedWeightedSpace:
        dims = dict(self.dims)
        for b, n in other.dims.items():
            dims[b] = dims.get(b, 0) + n
        return GradedWeightedSpace(
            dims, pure=self.pure and other.pure, virtual=self.virtual or other.virtual
        )

    def __mul__(self, other: GradedWeightedSpace) -> GradedWeightedSpace:
        """Tensor product: bidegrees add, dimensions multiply."""
        dims: dict[Bidegree, int] = {}
        for (d1, w1), n1 in self.dims.items():
            for (d2, w2), n2 in other.dims.items():
                key = (d1 + d2, w1 + w2)
                dims[key] = dims.get(key, 0) + n1 * n2
        return GradedWeightedSpace(
            dims, pure=self.pure and other.pure, virtual=self.virtual or other.virtual
        )

    def weight_polynomial(self) -> LPoly:
        """sum (-1)^degree dim s^weight, a polynomial in s = L^(1/2)."""
        terms: dict[int, int] = {}
        for (d, w), n in self.dims.items():
            terms[w] = terms.get(w, 0) + linalg.sign(d) * n
        return LPoly(terms)

    def euler_polynomial(self) -> LPoly:
        """sum (-1)^degree dim L^(weight / 2).

        Raises:
            InvalidInputError: If some weight is odd.
        """
        odd = [b for b in self.dims if b[1] % 2]
        if odd:
            raise InvalidInputError(f"Odd weights {odd} have no Euler polynomial in L")
        terms: dict[int, int] = {}
        for (d, w), n in self.dims.items():
            terms[w // 2] = terms.get(w // 2, 0) + linalg.sign(d) * n
        return LPoly(terms)


def point_cohomology() -> GradedWeightedSpace:
    return GradedWeightedSpace.unit()


def projective_space_cohomology(n: int) -> GradedWeightedSpace:
    return GradedWeightedSpace.from_cohomology({2 * i: 1 for i in range(n + 1)})


def cellular_cohomology(x: CellularVariety) -> GradedWeightedSpace:
    """A cell of dimension a contributes one class of degree and weight 2a."""
    by_degree: dict[int, int] = {}
    for a in x.cells:
        by_degree[2 * a] = by_degree.get(2 * a, 0) + 1
    return GradedWeightedSpace.from_cohomology(by_degree)


def curve_cohomology(genus: int) -> GradedWeightedSpace:
    """Smooth projective curve of the given genus."""
    return GradedWeightedSpace.from_cohomology({0: 1, 1: 2 * genus, 2: 1})


Monomial = tuple[tuple[BasisVector, ...], tuple[BasisVector, ...]]


def _monomials(
    v: GradedWeightedSpace, p: int, exterior_on_even: bool
) -> Iterator[Monomial]:
    if p < 0:
        raise InvalidInputError("Power must be non-negative")
    even, odd = v.even_basis(), v.odd_basis()
    exterior, symmetric = combinations, combinations_with_replacement
    even_rule, odd_rule = (exterior, symmetric) if exterior_on_even else (symmetric, exterior)
    for i in range(p + 1):
        for even_part in even_rule(even, i):
            for odd_part in odd_rule(odd, p - i):
                yield even_part, odd_part


def _monomial_bidegree(monomial: Monomial) -> Bidegree:
    factors = (*monomial[0], *monomial[1])
    return sum(f[0] for f in factors), sum(f[1] for f in factors)


def _table(monomials: Iterator[Monomial], pure: bool) -> GradedWeightedSpace:
    dims: dict[Bidegree, int] = {}
    for monomial in monomials:
        key = _monomial_bidegree(monomial)
        dims[key] = dims.get(key, 0) + 1
    return GradedWeightedSpace(dims, pure=pure)


def lambda_monomials(v: GradedWeightedSpace, p: int) -> list[Monomial]:
    """Basis of the graded exterior power: even subsets times odd multisets."""
    return list(_monomials(v, p, exterior_on_even=True))


def lambda_gr(v: GradedWeightedSpace, p: int) -> GradedWeightedSpace:
    """Graded exterior power with the Koszul sign rule."""
    return _table(_monomials(v, p, exterior_on_even=True), pure=v.pure)


def sym_gr(v: GradedWeightedSpace, p: int) -> GradedWeightedSpace:
    """Graded symmetric power: symmetric on even classes, exterior on odd ones."""
    return _table(_monomials(v, p, exterior_on_even=False), pure=v.pure)


def lambda_total_dimensions(v: GradedWeightedSpace, N: int) -> list[int]:
    """Coefficients of (1 + t)^even / (1 - t)^odd through t^N."""
    even, odd = len(v.even_basis()), len(v.odd_basis())
    return [
        sum(comb(even, i) * comb(odd + p - i - 1, p - i) if p - i else comb(even, i) for i in range(p + 1))
        for p in range(N + 1)
    ]


@dataclass(frozen=True)
class KoszulReport:
    """Coefficients of Sym_t(V) * Lambda_{-t}(V) that failed to match 1."""

    degree: int
    mismatches: dict[int, GradedWeightedSpace]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "passed": self.passed,
            "mismatches": {str(m): t.to_dict() for m, t in self.mismatches.items()},
        }


def koszul_inverse_check(v: GradedWeightedSpace, N: int) -> KoszulReport:
    """Verify sum_k Sym^k(V) t^k times sum_k (-1)^k Lambda^k(V) t^k = 1 through t^N.

    Products are taken in virtual tables, where bidegrees add.
    """
    if N < 1:
        raise InvalidInputError("Check degree must be at least 1")
    symmetric = [sym_gr(v, k) for k in range(N + 1)]
    exterior = [lambda_gr(v, k).scale((-1) ** k) for k in range(N + 1)]
    mismatches = {}
    for m in range(N + 1):
        total = GradedWeightedSpace({}, virtual=True)
        for k in range(m + 1):
            total = total + symmetric[k] * exterior[m - k]
        expected = GradedWeightedSpace.unit() if m == 0 else GradedWeightedSpace.zero()
        if total.dims != expected.dims:
            mismatches[m] = total
    if mismatches:
        logger.warning("Koszul inversion fails in degrees %s", sorted(mismatches))
    return KoszulReport(N, mismatches)


def _check_pure(v: GradedWeightedSpace) -> None:
    if not v.pure:
        raise InvalidInputError("Cohomology table must be flagged pure (weight = degree)")


@dataclass(frozen=True)
class SpecialValueTable:
    """Terms k of the cohomological inverse special value, one table each."""

    n: int
    terms: dict[int, GradedWeightedSpace]

    def weight_polynomial(self) -> LPoly:
        return sum((t.weight_polynomial() for t in self.terms.values()), LPoly(0))

    def euler_polynomial(self) -> LPoly:
        return sum((t.euler_polynomial() for t in self.terms.values()), LPoly(0))

    def to_dict(self) -> dict:
        return {"n": self.n, "terms": {str(k): t.to_dict() for k, t in self.terms.items()}}


def special_value(v: GradedWeightedSpace, dim_x: int, n: int, k_max: int) -> SpecialValueTable:
    """Term k is Lambda_gr(V, k) raised k in degree and twisted by L^(-nk).

    L is the class of A^1, one dimension at (2, 2), so the twist lowers both
    degree and weight by 2nk.

    Raises:
        InvalidInputError: If V is not pure, n < 1, or V has classes above 2 dim_x.
    """
    _check_pure(v)
    if n < 1 or k_max < 0:
        raise InvalidInputError("Special value needs n >= 1 and k_max >= 0")
    if any(d > 2 * dim_x for d, _ in v.dims):
        raise InvalidInputError(f"Classes above degree {2 * dim_x} for dimension {dim_x}")
    terms = {k: lambda_gr(v, k).shift(degree=k - 2 * n * k, weight=-2 * n * k) for k in range(k_max + 1)}
    return SpecialValueTable(n, terms)


@dataclass(frozen=True)
class StableEntry:
    degree: int
    rank: int
    weight: int
    dim: int


@dataclass(frozen=True)
class StableHomologyTable:
    """Stable weight-graded homology of the smooth-section locus.

    Each entry is a piece of dimension dim in homological degree i, rank
    grading k and weight.
    """

    entries: tuple[StableEntry, ...]
    k_max: int

    def by_degree_and_rank(self) -> dict[tuple[int, int], int]:
        table: dict[tuple[int, int], int] = {}
        for e in self.entries:
            table[(e.degree, e.rank)] = table.get((e.degree, e.rank), 0) + e.dim
        return dict(sorted(table.items()))

    def poincare_polynomial(self) -> dict[int, int]:
        """Degree -> total dimension."""
        totals: dict[int, int] = {}
        for e in self.entries:
            totals[e.degree] = totals.get(e.degree, 0) + e.dim
        return dict(sorted(totals.items()))

    def weight_polynomial(self) -> LPoly:
        terms: dict[int, int] = {}
        for e in self.entries:
            terms[e.weight] = terms.get(e.weight, 0) + linalg.sign(e.degree) * e.dim
        return LPoly(terms)

    def euler_polynomial(self) -> LPoly:
        """sum (-1)^i dim L^(weight / 2); requires even weights."""
        if any(e.weight % 2 for e in self.entries):
            raise InvalidInputError("Table has odd weights; use weight_polynomial")
        terms: dict[int, int] = {}
        for e in self.entries:
            terms[e.weight // 2] = terms.get(e.weight // 2, 0) + linalg.sign(e.degree) * e.dim
        return LPoly(terms)

    def to_dict(self) -> dict:
        return {
            "k_max": self.k_max,
            "table": [
                {"i": e.degree, "k": e.rank, "weight": e.weight, "dim": e.dim} for e in self.entries
            ],
            "poincare": {str(i): n for i, n in self.poincare_polynomial().items()},
        }


def stable_homology_table(v: GradedWeightedSpace, dim_x: int, k_max: int) -> StableHomologyTable:
    """Stable homology from sign-isotypic homology of powers of X.

    The rank-k piece in degree i is H_{i-k}(X^k)[sgn] with a Tate twist by k.
    A cohomology class of degree j and weight w in Lambda_gr(V, k) gives a
    homology class of degree j and weight -w; the shift by k and the twist
    place it at i = j + k with weight -w - 2k. For P^1 and k = 1 the classes
    of degree 0 and 2 land at i = 1 and i = 3 with weights -2 and -4.

    Raises:
        InvalidInputError: If V is not pure or k_max < 0.
    """
    _check_pure(v)
    if k_max < 0:
        raise InvalidInputError("k_max must be non-negative")
    if any(d > 2 * dim_x for d, _ in v.dims):
        raise InvalidInputError(f"Classes above degree {2 * dim_x} for dimension {dim_x}")
    entries = []
    for k in range(k_max + 1):
        for (j, w), n in lambda_gr(v, k).dims.items():
            entries.append(StableEntry(degree=j + k, rank=k, weight=-w - 2 * k, dim=n))
    entries.sort(key=lambda e: (e.degree, e.rank, e.weight))
    logger.info("Stable homology table with %d entries up to rank %d", len(entries), k_max)
    return StableHomologyTable(tuple(entries), k_max)


@dataclass
class GradedBanerjeeComplex:
    """Exterior powers of V with differential given by wedging with the unit."""

    complex: ChainComplexQ
    terms: dict[int, GradedWeightedSpace]
    betti: dict[int, int]
    betti_by_bidegree: dict[int, dict[Bidegree, int]]

    @property
    def euler_characteristic(self) -> int:
        return self.complex.euler_characteristic()

    @property
    def euler_from_terms(self) -> int:
        return sum(linalg.sign(p) * t.total_dimension for p, t in self.terms.items())

    def to_dict(self) -> dict:
        return {
            "terms": {str(p): t.to_dict() for p, t in self.terms.items()},
            "betti": {str(p): n for p, n in self.betti.items()},
            "betti_by_bidegree": {
                str(p): {f"{d},{w}": n for (d, w), n in table.items()}
                for p, table in self.betti_by_bidegree.items()
            },
            "euler_characteristic": self.euler_characteristic,
        }


def banerjee_complex_graded(v: GradedWeightedSpace, p_max: int) -> GradedBanerjeeComplex:
    """Term p is Lambda_gr(V, p + 1); d(w) = u ^ w for the unit class u.

    The unit is the first basis vector of bidegree (0, 0). Even classes
    anticommute inside the exterior power, so inserting the unit at its
    sorted position costs one sign per even factor before it; a monomial
    already containing the unit is sent to zero.

    Raises:
        InvalidInputError: If V has no class in bidegree (0, 0).
    """
    if v.dim(0, 0) == 0:
        raise InvalidInputError("Graded Banerjee complex needs a unit class in bidegree (0, 0)")
    if p_max < 0:
        raise InvalidInputError("p_max must be non-negative")
    unit: BasisVector = (0, 0, 0)
    bases = {-p: tuple(lambda_monomials(v, p + 1)) for p in range(p_max + 1)}
    boundaries = {}
    for p in range(p_max):
        rows = {m: i for i, m in enumerate(bases[-p - 1])}
        entries = {}
        for j, (even_part, odd_part) in enumerate(bases[-p]):
            if unit in even_part:
                continue
            before = sum(1 for f in even_part if f < unit)
            wedged = tuple(sorted((unit, *even_part)))
            entries[(rows[(wedged, odd_part)], j)] = (-1) ** before
        boundaries[-p] = linalg.from_entries(entries, len(rows), len(bases[-p]))
    complex_ = ChainComplexQ(bases, boundaries)

    by_bidegree: dict[int, dict[Bidegree, int]] = {}
    for bidegree in sorted({_monomial_bidegree(m) for ms in bases.values() for m in ms}):
        keep = {k: [i for i, m in enumerate(ms) if _monomial_bidegree(m) == bidegree] for k, ms in bases.items()}
        piece = ChainComplexQ(
            {k: tuple(bases[k][i] for i in idx) for k, idx in keep.items()},
            {
                k: linalg.submatrix(complex_.boundary(k), keep[k - 1], idx)
                for k, idx in keep.items()
                if k - 1 in keep and idx and keep[k - 1]
            },
        )
        for k, n in betti(piece).items():
            by_bidegree.setdefault(-k, {})[bidegree] = n
    total = {-k: n for k, n in sorted(betti(complex_).items(), reverse=True)}
    terms = {p: lambda_gr(v, p + 1) for p in range(p_max + 1)}
    return GradedBanerjeeComplex(complex_, terms, total, dict(sorted(by_bidegree.items())))
