"""Laurent polynomials in L, truncated series over them, and Kapranov zeta functions.

Classes of cellular varieties are polynomials in L = [A^1], so every
coefficient below is an honest integer Laurent polynomial. Series carry an
explicit precision N: coefficients of t^0..t^N are known exactly.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from motivic_ie.compositions import compositions
from motivic_ie.errors import InvalidInputError

logger = logging.getLogger(__name__)


class LPoly:
    """Integer Laurent polynomial in the formal symbol L."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | int = 0) -> None:
        if isinstance(terms, int):
            terms = {0: terms}
        self._terms = {int(e): int(c) for e, c in terms.items() if c}

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> LPoly:
        return cls({exponent: coefficient})

    @classmethod
    def one(cls) -> LPoly:
        return cls(1)

    @property
    def terms(self) -> dict[int, int]:
        return dict(sorted(self._terms.items()))

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int | None:
        return max(self._terms, default=None)

    @property
    def low_degree(self) -> int | None:
        return min(self._terms, default=None)

    @staticmethod
    def _coerce(other: object) -> LPoly | None:
        if isinstance(other, LPoly):
            return other
        if isinstance(other, int):
            return LPoly(other)
        return None

    def __add__(self, other: object) -> LPoly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return LPoly(terms)

    __radd__ = __add__

    def __neg__(self) -> LPoly:
        return LPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> LPoly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> LPoly:
        return (-self) + other

    def __mul__(self, other: object) -> LPoly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
        return LPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LPoly:
        if n < 0:
            if len(self._terms) != 1 or abs(next(iter(self._terms.values()))) != 1:
                raise InvalidInputError("Only monomials with unit coefficient can be inverted")
            ((e, c),) = self._terms.items()
            return LPoly({e * n: c ** (-n)})
        result = LPoly(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def evaluate(self, q: int | Fraction) -> Fraction:
        """Specialize L -> q exactly."""
        q = Fraction(q)
        if q == 0 and any(e < 0 for e in self._terms):
            raise InvalidInputError("Cannot evaluate negative powers of L at 0")
        return sum((c * q**e for e, c in self._terms.items()), Fraction(0))

    def to_dict(self) -> dict[str, int]:
        return {str(e): c for e, c in sorted(self._terms.items())}

    @classmethod
    def from_dict(cls, data: Mapping) -> LPoly:
        return cls({int(e): int(c) for e, c in data.items()})

    def __repr__(self) -> str:
        return f"LPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for e, c in sorted(self._terms.items()):
            if e == 0:
                body = str(abs(c))
            else:
                power = "L" if e == 1 else f"L^{e}"
                body = power if abs(c) == 1 else f"{abs(c)}*{power}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text


L = LPoly.monomial(1)


@dataclass(frozen=True)
class MotSeries:
    """Power series in t with LPoly coefficients, known through t^precision."""

    coefficients: tuple[LPoly, ...]
    precision: int

    def __post_init__(self) -> None:
        if self.precision < 0:
            raise InvalidInputError("Series precision must be non-negative")
        coeffs = [LPoly(c) if isinstance(c, int) else c for c in self.coefficients]
        coeffs = coeffs[: self.precision + 1]
        coeffs.extend(LPoly(0) for _ in range(self.precision + 1 - len(coeffs)))
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def one(cls, precision: int) -> MotSeries:
        return cls((LPoly(1),), precision)

    def coefficient(self, k: int) -> LPoly:
        if k > self.precision:
            raise InvalidInputError(f"Coefficient t^{k} is beyond precision {self.precision}")
        return self.coefficients[k]

    def __add__(self, other: MotSeries) -> MotSeries:
        precision = min(self.precision, other.precision)
        return MotSeries(
            tuple(self.coefficients[k] + other.coefficients[k] for k in range(precision + 1)),
            precision,
        )

    def __mul__(self, other: MotSeries) -> MotSeries:
        precision = min(self.precision, other.precision)
        coeffs = []
        for k in range(precision + 1):
            total = LPoly(0)
            for i in range(k + 1):
                total = total + self.coefficients[i] * other.coefficients[k - i]
            coeffs.append(total)
        return MotSeries(tuple(coeffs), precision)

    def scale_variable(self, factor: LPoly) -> MotSeries:
        """Substitute t -> factor * t."""
        return MotSeries(
            tuple(c * factor**k for k, c in enumerate(self.coefficients)), self.precision
        )

    def substitute_power(self, m: int) -> MotSeries:
        """Substitute t -> t^m; the result is known through t^(m * precision)."""
        if m < 1:
            raise InvalidInputError("Power substitution needs m >= 1")
        precision = m * self.precision
        coeffs = [LPoly(0)] * (precision + 1)
        for k, c in enumerate(self.coefficients):
            coeffs[m * k] = c
        return MotSeries(tuple(coeffs), precision)

    def truncate(self, precision: int) -> MotSeries:
        if precision > self.precision:
            raise InvalidInputError(
                f"Cannot raise precision from {self.precision} to {precision}"
            )
        return MotSeries(self.coefficients[: precision + 1], precision)

    def specialize(self, q: int | Fraction) -> list[Fraction]:
        """Specialize L -> q in every coefficient."""
        return [c.evaluate(q) for c in self.coefficients]

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "coefficients": [c.to_dict() for c in self.coefficients],
            "display": [str(c) for c in self.coefficients],
        }


def invert(s: MotSeries) -> MotSeries:
    """Multiplicative inverse to the stored precision.

    Raises:
        InvalidInputError: If the constant term is not 1.
    """
    if s.coefficients[0] != 1:
        raise InvalidInputError(f"Series constant term must be 1, got {s.coefficients[0]}")
    inverse = [LPoly(1)]
    for k in range(1, s.precision + 1):
        total = LPoly(0)
        for i in range(1, k + 1):
            total = total + s.coefficients[i] * inverse[k - i]
        inverse.append(-total)
    return MotSeries(tuple(inverse), s.precision)


@dataclass(frozen=True)
class CellularVariety:
    """A variety paved by affine cells, recorded by cell dimensions."""

    cells: tuple[int, ...]

    def __post_init__(self) -> None:
        cells = tuple(sorted(int(a) for a in self.cells))
        if not cells:
            raise InvalidInputError("A cellular variety needs at least one cell")
        if cells[0] < 0:
            raise InvalidInputError(f"Cell dimensions must be non-negative: {cells}")
        object.__setattr__(self, "cells", cells)

    @property
    def dim(self) -> int:
        return self.cells[-1]

    def class_of(self) -> LPoly:
        """[X] = sum of L^a over cells."""
        return sum((L**a for a in self.cells), LPoly(0))

    def disjoint_union(self, other: CellularVariety) -> CellularVariety:
        return CellularVariety(self.cells + other.cells)

    def product(self, other: CellularVariety) -> CellularVariety:
        return CellularVariety(tuple(a + b for a in self.cells for b in other.cells))

    def to_dict(self) -> dict:
        return {"type": "cellular", "cells": list(self.cells)}

    @classmethod
    def from_dict(cls, data: Mapping) -> CellularVariety:
        if data.get("type", "cellular") != "cellular":
            raise InvalidInputError(f"Unsupported variety type: {data.get('type')}")
        try:
            return cls(tuple(data["cells"]))
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f"Variety data needs a 'cells' list: {e}") from e


def point() -> CellularVariety:
    return CellularVariety((0,))


def affine_space(n: int) -> CellularVariety:
    return CellularVariety((n,))


def affine_line() -> CellularVariety:
    return affine_space(1)


def projective_space(n: int) -> CellularVariety:
    if n < 0:
        raise InvalidInputError("Projective space dimension must be non-negative")
    return CellularVariety(tuple(range(n + 1)))


def product(varieties: Iterable[CellularVariety]) -> CellularVariety:
    result = point()
    for variety in varieties:
        result = result.product(variety)
    return result


def _geometric(factor: LPoly, precision: int) -> MotSeries:
    return MotSeries(tuple(factor**k for k in range(precision + 1)), precision)


def kapranov_zeta(x: CellularVariety, N: int) -> MotSeries:
    """Product over cells a of 1 / (1 - L^a t), through t^N."""
    if N < 0:
        raise InvalidInputError("Truncation degree must be non-negative")
    series = MotSeries.one(N)
    for a in x.cells:
        series = series * _geometric(L**a, N)
    return series


def config_gf(x: CellularVariety, N: int) -> MotSeries:
    """Generating series of unordered configuration spaces, Z(t) / Z(t^2).

    The identity is validated against finite-field point counts only.
    """
    zeta = kapranov_zeta(x, N)
    return (zeta * invert(kapranov_zeta(x, N).substitute_power(2))).truncate(N)


def mu_terms_gamma(x: CellularVariety, k: int) -> LPoly:
    """Degree-k coefficient of the inverse zeta, summed over compositions.

    Each composition (a_0, ..., a_p) of k contributes
    (-1)^(p+1) times the product of the symmetric power classes [S^a_i X].
    """
    if k < 1:
        raise InvalidInputError("Composition degree must be at least 1")
    zeta = kapranov_zeta(x, k)
    total = LPoly(0)
    for composition in compositions(k):
        term = LPoly((-1) ** len(composition))
        for part in composition:
            term = term * zeta.coefficients[part]
        total = total + term
    return total


@dataclass(frozen=True)
class TruncatedLaurent:
    """A Laurent series in L^-1 known through L^-precision.

    exact is set when no omitted term could be non-zero.
    """

    poly: LPoly
    precision: int
    exact: bool = False

    def evaluate(self, q: int | Fraction) -> Fraction:
        return self.poly.evaluate(q)

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "exact": self.exact,
            "terms": self.poly.to_dict(),
            "display": str(self.poly),
        }


def value_at_inverse_power(
    series: MotSeries, n: int, N: int, dim: int, terminates_at: int | None = None
) -> TruncatedLaurent:
    """Evaluate a series at t = L^-n, keeping every power down to L^-N.

    A series known to vanish past t^terminates_at is a polynomial and is
    evaluated term by term for any n. Otherwise the t^k coefficient has
    L-degree at most k * dim, so it only reaches L^-j for j >= k * (n - dim),
    and the series converges only for n > dim.

    Raises:
        InvalidInputError: If an infinite series is evaluated at n <= dim, or
            the series is too short to determine the requested powers.
    """
    polynomial = terminates_at is not None and series.precision >= terminates_at
    if polynomial:
        needed = terminates_at
    else:
        if n <= dim:
            raise InvalidInputError(f"Evaluation at L^-{n} diverges for dimension {dim}")
        needed = N // (n - dim)
        if series.precision < needed:
            raise InvalidInputError(
                f"Series known through t^{series.precision}; L^-{N} needs t^{needed}"
            )
    terms: dict[int, int] = {}
    dropped = False
    for k in range(needed + 1):
        for e, c in series.coefficients[k].terms.items():
            exponent = e - n * k
            if exponent < -N:
                dropped = True
                continue
            terms[exponent] = terms.get(exponent, 0) + c
    return TruncatedLaurent(LPoly(terms), N, exact=polynomial and not dropped)


def stable_limit(x: CellularVariety, n: int, N: int) -> TruncatedLaurent:
    """Inverse Kapranov zeta of X evaluated at t = L^-n, through L^-N.

    The inverse of a cellular zeta function is the finite product of
    (1 - L^a t) over the cells, so every n >= 1 has a value; positive powers
    of L appear when n is at most the dimension. The result is exact once N
    reaches n times the number of cells.
    """
    if n < 1:
        raise InvalidInputError("Stable limit needs n >= 1")
    if N < 0:
        raise InvalidInputError("Precision must be non-negative")
    cells = len(x.cells)
    inverse = invert(kapranov_zeta(x, cells))
    value = value_at_inverse_power(inverse, n, N, x.dim, terminates_at=cells)
    logger.info("Stable limit for cells %s at n=%d: %s", x.cells, n, value.poly)
    return value


def exact_stable_limit(x: CellularVariety, n: int) -> TruncatedLaurent:
    """stable_limit with enough precision to be exact."""
    return stable_limit(x, n, n * len(x.cells))


def series_from_counts(counts: Sequence[int]) -> MotSeries:
    """Series with constant coefficients, e.g. point counts."""
    return MotSeries(tuple(LPoly(c) for c in counts), len(counts) - 1)
