"""Exhaustive point counts over prime fields.

Polynomials are dense coefficient lists, highest degree first, as used by
sympy.polys.galoistools. Only prime fields are supported: every geometric
condition (distinct points, reduced vanishing loci) is expressed through
squarefreeness and coprimality of F_q-polynomials.
"""

from __future__ import annotations

import logging
import multiprocessing
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from itertools import product

from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_diff, gf_gcd, gf_mul, gf_sqf_p

from motivic_ie.compositions import compositions, graded_compositions
from motivic_ie.errors import InvalidInputError
from motivic_ie.guards import DEFAULT_GUARD, CostGuard
from motivic_ie.motivic import affine_line, invert, kapranov_zeta, projective_space, stable_limit

logger = logging.getLogger(__name__)

Poly = tuple[int, ...]


def check_prime(q: int) -> None:
    """Raise InvalidInputError unless q is a prime."""
    if not isinstance(q, int) or not isprime(q):
        raise InvalidInputError(f"Field size must be prime, got {q}")


def _monic(q: int, d: int, prefix: Sequence[int] = ()) -> list[Poly]:
    tail = d - len(prefix)
    return [(1, *prefix, *rest) for rest in product(range(q), repeat=tail)]


def is_squarefree(f: Poly, q: int) -> bool:
    """Squarefree test that also rejects p-th powers (f' = 0) of degree >= 2."""
    coeffs = ZZ.map(list(f))
    if len(coeffs) > 2 and not gf_diff(coeffs, q, ZZ):
        return False
    return gf_sqf_p(coeffs, q, ZZ)


def _count_squarefree_chunk(q: int, d: int, prefix: tuple[int, ...]) -> int:
    return sum(1 for f in _monic(q, d, prefix) if is_squarefree(f, q))


@cache
def squarefree_monic(q: int, d: int) -> tuple[Poly, ...]:
    """All squarefree monic polynomials of degree d, in lexicographic order."""
    return tuple(f for f in _monic(q, d) if is_squarefree(f, q))


def count_squarefree_monic(q: int, d: int, guard: CostGuard = DEFAULT_GUARD) -> int:
    """Number of squarefree monic polynomials of degree d over F_q.

    Raises:
        InvalidInputError: If q is not prime or d < 0.
        CostGuardError: If q^d exceeds the enumeration guard.
    """
    check_prime(q)
    if d < 0:
        raise InvalidInputError("Degree must be non-negative")
    guard.check_enumeration(q**d, f"squarefree monic degree {d}")
    return _count_squarefree_chunk(q, d, ())


def _colored(q: int, parts: Sequence[int]) -> int:
    def extend(index: int, running: list) -> int:
        if index == len(parts):
            return 1
        total = 0
        for f in squarefree_monic(q, parts[index]):
            coeffs = ZZ.map(list(f))
            if gf_gcd(running, coeffs, q, ZZ) != [ZZ.one]:
                continue
            total += extend(index + 1, gf_mul(running, coeffs, q, ZZ))
        return total

    return extend(0, [ZZ.one])


def _check_parts(q: int, parts: Sequence[int], guard: CostGuard) -> None:
    check_prime(q)
    if not parts:
        raise InvalidInputError("Composition must be non-empty")
    if any(a < 1 for a in parts):
        raise InvalidInputError(f"Composition parts must be positive: {tuple(parts)}")
    guard.check_enumeration(q ** sum(parts), f"colored configurations {tuple(parts)}")


def count_colored_configs(q: int, parts: Sequence[int], guard: CostGuard = DEFAULT_GUARD) -> int:
    """Tuples (f_1, ..., f_m) of monic f_i of degree a_i whose product is squarefree.

    These are the F_q-points of the colored configuration space of A^1 with
    a_i points of color i.

    Raises:
        InvalidInputError: If q is not prime, parts is empty or a part is < 1.
    """
    _check_parts(q, parts, guard)
    return _colored(q, tuple(parts))


def count_colored_configs_p1(q: int, parts: Sequence[int], guard: CostGuard = DEFAULT_GUARD) -> int:
    """Colored configurations on P^1: the point at infinity is unused or has one color."""
    _check_parts(q, parts, guard)
    parts = tuple(parts)
    total = _colored(q, parts)
    for j in range(len(parts)):
        total += _colored(q, (*parts[:j], parts[j] - 1, *parts[j + 1 :]))
    return total


def count_configurations(q: int, k: int, projective: bool = False, guard: CostGuard = DEFAULT_GUARD) -> int:
    """F_q-points of the unordered configuration space of k points on A^1 or P^1."""
    if k == 0:
        check_prime(q)
        return 1
    if projective:
        return count_colored_configs_p1(q, (k,), guard)
    return count_squarefree_monic(q, k, guard)


def count_effective_divisors(q: int, k: int, projective: bool = False, guard: CostGuard = DEFAULT_GUARD) -> int:
    """F_q-points of the k-th symmetric power of A^1 or P^1.

    Divisors on A^1 are monic polynomials of degree k; divisors on P^1 are
    non-zero binary forms of degree k up to scalars.
    """
    check_prime(q)
    if k < 0:
        raise InvalidInputError("Degree must be non-negative")
    if not projective:
        guard.check_enumeration(q**k, f"monic degree {k}")
        return len(_monic(q, k))
    guard.check_enumeration(q ** (k + 1), f"binary forms of degree {k}")
    nonzero = sum(1 for form in product(range(q), repeat=k + 1) if any(form))
    return nonzero // (q - 1)


def count_smooth_sections_p1(
    q: int, d: int, workers: int = 1, guard: CostGuard = DEFAULT_GUARD
) -> int:
    """Non-zero binary forms of degree d over F_q with reduced vanishing locus.

    A form F is scaled so its highest non-zero X-coefficient is 1; then
    F(x, 1) is monic of degree m and Y^(d - m) divides F. Chunks with
    d - m >= 2 vanish doubly at infinity and are skipped. The remaining
    chunks are split by the second coefficient and may run in a process
    pool; the integer total does not depend on scheduling.

    Raises:
        InvalidInputError: If q is not prime or d < 1.
        CostGuardError: If q^(d+1) exceeds the enumeration guard.
    """
    check_prime(q)
    if d < 1:
        raise InvalidInputError("Degree must be at least 1")
    guard.check_enumeration(q ** (d + 1), f"binary forms of degree {d}")
    tasks = []
    for m in (d - 1, d):
        if m == 0:
            tasks.append((q, 0, ()))
        else:
            tasks.extend((q, m, (c,)) for c in range(q))
    if workers > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            counts = pool.starmap(_count_squarefree_chunk, tasks)
    else:
        counts = [_count_squarefree_chunk(*task) for task in tasks]
    total = (q - 1) * sum(counts)
    logger.info("Smooth sections of O(%d) on P^1 over F_%d: %d", d, q, total)
    return total


@dataclass(frozen=True)
class VWReport:
    """Colored-configuration inversion against the inverse zeta of A^1."""

    q: int
    N: int
    counted: list[int]
    predicted: list[int]
    terms: dict[tuple[int, ...], int]

    @property
    def passed(self) -> bool:
        return self.counted == self.predicted

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "N": self.N,
            "counted": self.counted,
            "predicted": self.predicted,
            "terms": [{"parts": list(a), "signed_count": v} for a, v in self.terms.items()],
            "passed": self.passed,
        }


def vw_inversion_check(q: int, N: int, guard: CostGuard = DEFAULT_GUARD) -> VWReport:
    """Compare 1 + sum (-1)^(p+1) #C^a(A^1)(F_q) t^|a| with 1 - q t through t^N.

    Raises:
        CostGuardError: If N exceeds the inversion degree guard.
    """
    check_prime(q)
    if N < 0:
        raise InvalidInputError("Degree must be non-negative")
    guard.check_vw_degree(N)
    terms = {}
    counted = [1] + [0] * N
    for m in range(1, N + 1):
        for composition in compositions(m):
            signed = (-1) ** len(composition) * count_colored_configs(q, composition, guard)
            terms[composition] = signed
            counted[m] += signed
    predicted = [int(c) for c in invert(kapranov_zeta(affine_line(), N)).specialize(q)]
    report = VWReport(q, N, counted, predicted, terms)
    logger.info("Inversion check q=%d N=%d: %s", q, N, "pass" if report.passed else "FAIL")
    return report


@dataclass(frozen=True)
class ResidualReport:
    """Truncated inclusion-exclusion for the discriminant of O(d) on P^1."""

    q: int
    d: int
    k: int
    truncated: int
    exact: int

    @property
    def residual(self) -> int:
        return self.exact - self.truncated

    @property
    def bound(self) -> int:
        return self.q ** (self.d - self.k)

    @property
    def within_bound(self) -> bool:
        return abs(self.residual) <= self.bound

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "d": self.d,
            "k": self.k,
            "truncated_sum": self.truncated,
            "exact": self.exact,
            "residual": self.residual,
            "bound": self.bound,
            "within_bound": self.within_bound,
        }


def truncated_ie_discriminant(
    q: int, d: int, k: int, workers: int = 1, guard: CostGuard = DEFAULT_GUARD
) -> ResidualReport:
    """Inclusion-exclusion over singular points, truncated at k points.

    Sections vanishing doubly at a configuration of s points form a subspace
    of codimension 2s when d >= 2s - 1, so the truncated sum is
    sum over compositions a with |a| <= k of (-1)^p #C^a(P^1)(F_q) q^(d+1-2|a|).
    The exact discriminant count includes the zero form.

    Raises:
        InvalidInputError: If d < 2k + 1 or k < 1.
        CostGuardError: If q^(d+1) exceeds the enumeration guard.
    """
    check_prime(q)
    if k < 1 or d < 2 * k + 1:
        raise InvalidInputError(f"Need k >= 1 and d >= 2k + 1, got d={d}, k={k}")
    guard.check_enumeration(q ** (d + 1), f"binary forms of degree {d}")
    truncated = 0
    for composition in graded_compositions(k):
        size = sum(composition)
        sign = (-1) ** (len(composition) - 1)
        truncated += sign * count_colored_configs_p1(q, composition, guard) * q ** (d + 1 - 2 * size)
    exact = q ** (d + 1) - count_smooth_sections_p1(q, d, workers, guard)
    return ResidualReport(q, d, k, truncated, exact)


@dataclass(frozen=True)
class SweepReport:
    reports: list[ResidualReport]

    @property
    def monotone(self) -> bool:
        """Whether |residual| never increases with k (reported, not required)."""
        sizes = [abs(r.residual) for r in self.reports]
        return all(a >= b for a, b in zip(sizes, sizes[1:], strict=False))

    def to_dict(self) -> dict:
        return {"reports": [r.to_dict() for r in self.reports], "monotone": self.monotone}


def truncated_ie_sweep(q: int, d: int, workers: int = 1, guard: CostGuard = DEFAULT_GUARD) -> SweepReport:
    """truncated_ie_discriminant for every k with d >= 2k + 1."""
    return SweepReport(
        [truncated_ie_discriminant(q, d, k, workers, guard) for k in range(1, (d - 1) // 2 + 1)]
    )


@dataclass(frozen=True)
class DensityReport:
    """Smooth-section densities against the stable limit."""

    q: int
    densities: dict[int, Fraction]
    limit: Fraction

    @property
    def exact_from(self) -> int | None:
        """First d from which every density in the range equals the limit."""
        first = None
        for d in sorted(self.densities, reverse=True):
            if self.densities[d] != self.limit:
                break
            first = d
        return first

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "densities": {str(d): v for d, v in self.densities.items()},
            "limit": self.limit,
            "exact_from": self.exact_from,
        }


def density_report(
    q: int, d_max: int, d_min: int = 1, workers: int = 1, guard: CostGuard = DEFAULT_GUARD
) -> DensityReport:
    """#smooth / q^(d+1) for each d against stable_limit(P^1, 2) at L = q."""
    check_prime(q)
    if d_min < 1 or d_max < d_min:
        raise InvalidInputError(f"Invalid degree range {d_min}..{d_max}")
    densities = {
        d: Fraction(count_smooth_sections_p1(q, d, workers, guard), q ** (d + 1))
        for d in range(d_min, d_max + 1)
    }
    line = projective_space(1)
    limit = stable_limit(line, 2, 2 * len(line.cells)).evaluate(q)
    return DensityReport(q, densities, limit)
