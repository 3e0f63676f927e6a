"""Finite-set model of zero-cycles: the skeletal E_1 complex and the Banerjee complex.

Both complexes are cochain complexes of functions on finite sets. They are
stored as homological complexes with degrees negated (cochain degree p sits
in homological degree -p) and filtered by minus the total size, so the
decreasing filtration "total size > s" becomes an increasing one.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations, product
from math import comb

from sympy.combinatorics import Permutation
from sympy.polys.matrices import DomainMatrix

from motivic_ie import linalg
from motivic_ie.compositions import graded_compositions
from motivic_ie.errors import InvalidInputError
from motivic_ie.families import multiset_label, parse_multiset_label, symmetric, validate_alphabet
from motivic_ie.guards import DEFAULT_GUARD, CostGuard
from motivic_ie.homology import (
    ChainComplexQ,
    ChainMap,
    FilteredChainComplexQ,
    betti,
    chain_complex,
    induced_map,
    is_quasi_isomorphism,
)
from motivic_ie.motivic import CellularVariety, invert, kapranov_zeta
from motivic_ie.poset import MINUS_INFINITY, interval, nerve

logger = logging.getLogger(__name__)

Multiset = tuple[str, ...]
Cell = tuple[tuple[int, ...], tuple[Multiset, ...]]


def _differential(
    rows: Sequence, cols: Sequence, faces, guard: CostGuard, what: str
) -> DomainMatrix:
    guard.check_matrix(len(rows), len(cols), what)
    position = {cell: j for j, cell in enumerate(cols)}
    entries: dict[tuple[int, int], int] = {}
    for i, cell in enumerate(rows):
        for sign, face in faces(cell):
            key = (i, position[face])
            entries[key] = entries.get(key, 0) + sign
    return linalg.from_entries(entries, len(rows), len(cols))


@dataclass
class CompositionComplex:
    """Functions on tuples of multisets indexed by compositions with sum <= cutoff.

    The basis of cochain degree p is the list of pairs (a, x) where a has
    p + 1 positive parts and x is a tuple of sorted multisets with |x_i| = a_i.
    """

    alphabet: tuple[str, ...]
    cutoff: int
    filtered: FilteredChainComplexQ

    @property
    def complex(self) -> ChainComplexQ:
        return self.filtered.complex

    def basis(self, p: int) -> tuple[Cell, ...]:
        return self.complex.bases.get(-p, ())

    def term_dimensions(self) -> dict[int, int]:
        """Cochain degree -> dimension."""
        return {-k: self.complex.dim(k) for k in sorted(self.complex.degrees, reverse=True)}

    def composition_dimension(self, composition: Sequence[int]) -> int:
        n = len(self.alphabet)
        result = 1
        for part in composition:
            result *= comb(n + part - 1, part)
        return result

    def graded_piece(self, s: int) -> ChainComplexQ:
        """Summands with total size exactly s."""
        return self.filtered.graded_piece(-s)

    def euler_characteristic(self) -> int:
        return self.complex.euler_characteristic()


def skeletal_e1(
    alphabet: Sequence[str], cutoff: int, guard: CostGuard = DEFAULT_GUARD
) -> CompositionComplex:
    """Build the composition-indexed complex with alternating pullback differential.

    A cochain c in degree p has (dc)(a, x) = sum_i (-1)^i c(face_i(a, x)),
    where face_i merges parts i and i + 1 for i <= p and the last face
    forgets the final part.

    Raises:
        InvalidInputError: If the cutoff is below 1 or the alphabet is invalid.
    """
    letters = tuple(validate_alphabet(alphabet))
    if cutoff < 1:
        raise InvalidInputError("Cutoff must be at least 1")
    bases: dict[int, tuple[Cell, ...]] = {}
    for p in range(cutoff):
        cells = []
        for composition in graded_compositions(cutoff, parts=p + 1):
            pools = [combinations_with_replacement(letters, part) for part in composition]
            cells.extend((composition, x) for x in product(*pools))
        bases[-p] = tuple(cells)

    def faces(cell: Cell):
        a, x = cell
        last = len(a) - 1
        for i in range(last):
            merged_a = (*a[:i], a[i] + a[i + 1], *a[i + 2 :])
            merged_x = (*x[:i], tuple(sorted(x[i] + x[i + 1])), *x[i + 2 :])
            yield (-1) ** i, (merged_a, merged_x)
        yield (-1) ** last, (a[:-1], x[:-1])

    boundaries = {
        -p: _differential(bases[-p - 1], bases[-p], faces, guard, f"skeletal d^{p}")
        for p in range(cutoff - 1)
    }
    filtration = {k: tuple(-sum(a) for a, _ in cells) for k, cells in bases.items()}
    result = CompositionComplex(
        letters, cutoff, FilteredChainComplexQ(ChainComplexQ(bases, boundaries), filtration)
    )
    logger.debug("Skeletal E_1 over %d letters, cutoff %d: %s", len(letters), cutoff, result.term_dimensions())
    return result


@dataclass
class BanerjeeComplex:
    """Antisymmetric functions on ordered tuples, stored by their sorted supports.

    Cochain degree p has one basis element per (p + 1)-subset of the alphabet.
    """

    alphabet: tuple[str, ...]
    cutoff: int
    filtered: FilteredChainComplexQ

    @property
    def complex(self) -> ChainComplexQ:
        return self.filtered.complex

    def basis(self, p: int) -> tuple[tuple[str, ...], ...]:
        return self.complex.bases.get(-p, ())

    def term_dimensions(self) -> dict[int, int]:
        return {-k: self.complex.dim(k) for k in sorted(self.complex.degrees, reverse=True)}

    def graded_piece(self, s: int) -> ChainComplexQ:
        return self.filtered.graded_piece(-s)


def banerjee_complex(
    alphabet: Sequence[str], cutoff: int, guard: CostGuard = DEFAULT_GUARD
) -> BanerjeeComplex:
    """Sign-isotypic functions on tuples with d = sum_i (-1)^i (forget coordinate i)."""
    letters = tuple(validate_alphabet(alphabet))
    if cutoff < 1:
        raise InvalidInputError("Cutoff must be at least 1")
    top = min(cutoff, len(letters))
    bases = {-p: tuple(combinations(letters, p + 1)) for p in range(top)}

    def faces(subset: tuple[str, ...]):
        for i in range(len(subset)):
            yield (-1) ** i, subset[:i] + subset[i + 1 :]

    boundaries = {
        -p: _differential(bases[-p - 1], bases[-p], faces, guard, f"Banerjee d^{p}")
        for p in range(top - 1)
    }
    filtration = {k: tuple(-len(s) for s in subsets) for k, subsets in bases.items()}
    return BanerjeeComplex(
        letters, cutoff, FilteredChainComplexQ(ChainComplexQ(bases, boundaries), filtration)
    )


def _sign_of_arrangement(letters: Sequence[str]) -> int:
    ordered = sorted(letters)
    return Permutation([ordered.index(x) for x in letters]).signature()


def _piece_indices(filtered: FilteredChainComplexQ, s: int) -> dict[int, list[int]]:
    return {
        k: [i for i, v in enumerate(filtered.filtration[k]) if v == -s]
        for k in filtered.complex.degrees
    }


@dataclass
class AsymReport:
    """Antisymmetrization map with its verification artifacts."""

    chain_map: ChainMap
    commutes: bool
    filtered: bool
    piece_quasi_isomorphism: dict[int, bool]
    piece_betti: dict[int, dict[str, dict[int, int]]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.commutes and self.filtered and all(self.piece_quasi_isomorphism.values())

    def to_dict(self) -> dict:
        return {
            "commutes": self.commutes,
            "filtered": self.filtered,
            "filtered_quasi_isomorphism": self.passed,
            "pieces": {
                str(s): {
                    "quasi_isomorphism": verdict,
                    "skeletal_betti": {str(-k): v for k, v in self.piece_betti[s]["skeletal"].items()},
                    "banerjee_betti": {str(-k): v for k, v in self.piece_betti[s]["banerjee"].items()},
                }
                for s, verdict in sorted(self.piece_quasi_isomorphism.items())
            },
        }


def asym(e: CompositionComplex, b: BanerjeeComplex) -> AsymReport:
    """Antisymmetrization from the skeletal complex to the Banerjee complex.

    On the all-ones composition with distinct letters the map sends a basis
    function to the sign of the arrangement times the subset it spans; every
    other summand maps to zero.

    Raises:
        InvalidInputError: If the complexes use different alphabets or cutoffs.
    """
    if e.alphabet != b.alphabet or e.cutoff != b.cutoff:
        raise InvalidInputError(
            f"Complexes differ: alphabet {e.alphabet} vs {b.alphabet}, cutoff {e.cutoff} vs {b.cutoff}"
        )
    maps = {}
    for k in e.complex.degrees:
        rows = {subset: i for i, subset in enumerate(b.complex.bases.get(k, ()))}
        entries = {}
        for j, (a, x) in enumerate(e.complex.bases[k]):
            if any(part != 1 for part in a):
                continue
            letters = [m[0] for m in x]
            if len(set(letters)) != len(letters):
                continue
            entries[(rows[tuple(sorted(letters))], j)] = _sign_of_arrangement(letters)
        maps[k] = linalg.from_entries(entries, b.complex.dim(k), e.complex.dim(k))
    chain_map = ChainMap(e.complex, b.complex, maps)
    commutes = chain_map.verify()

    filtered = all(
        e.filtered.filtration[k][j] == b.filtered.filtration[k][i]
        for k, matrix in maps.items()
        for (i, j) in matrix.to_dok()
    )

    verdicts: dict[int, bool] = {}
    piece_betti: dict[int, dict[str, dict[int, int]]] = {}
    for s in range(1, e.cutoff + 1):
        source, target = e.graded_piece(s), b.graded_piece(s)
        source_keep = _piece_indices(e.filtered, s)
        target_keep = _piece_indices(b.filtered, s)
        piece_maps = {
            k: linalg.submatrix(maps[k], target_keep.get(k, []), source_keep[k]) for k in source.degrees
        }
        verdicts[s] = is_quasi_isomorphism(ChainMap(source, target, piece_maps))
        piece_betti[s] = {"skeletal": betti(source), "banerjee": betti(target)}
    logger.info("Antisymmetrization: commutes=%s filtered=%s pieces=%s", commutes, filtered, verdicts)
    return AsymReport(chain_map, commutes, filtered, verdicts, piece_betti)


@dataclass(frozen=True)
class GradedEulerReport:
    """Euler characteristic of each graded piece against -[t^s](1 - t)^n."""

    observed: dict[int, int]
    expected: dict[int, int]

    @property
    def passed(self) -> bool:
        return self.observed == self.expected


def skeletal_graded_euler(e: CompositionComplex) -> GradedEulerReport:
    """Compare graded Euler characteristics with the inverse multiset-count series.

    Multisets of size s over n letters are counted by the t^s coefficient of
    the zeta function of n points, so the inverse series is (1 - t)^n.
    """
    observed = {s: e.graded_piece(s).euler_characteristic() for s in range(1, e.cutoff + 1)}
    points = CellularVariety((0,) * len(e.alphabet))
    inverse = invert(kapranov_zeta(points, e.cutoff))
    expected = {s: -int(inverse.coefficient(s).evaluate(1)) for s in range(1, e.cutoff + 1)}
    return GradedEulerReport(observed, expected)


def _cycle_to_end(i: int, p: int) -> Permutation:
    """The cycle i -> i+1 -> ... -> p -> i on {0, ..., p}."""
    array = list(range(p + 1))
    for m in range(i, p):
        array[m] = m + 1
    array[p] = i
    return Permutation(array)


@dataclass(frozen=True)
class PermutationIdentityReport:
    checked: int
    failures: list[tuple[int, tuple[int, ...], int]]

    @property
    def passed(self) -> bool:
        return not self.failures


def permutation_identity_check(p_max: int = 4) -> PermutationIdentityReport:
    """Check how permutations commute past coordinate-forgetting maps.

    For sigma on {0, ..., p} and i, with j = sigma(i) and c_m the cycle
    m -> m+1 -> ... -> p -> m, tau = c_j^-1 sigma c_i fixes p. Its restriction
    satisfies sigma(alpha_i(k)) = alpha_j(tau(k)), where alpha_m skips m, and
    sgn(tau) = sgn(sigma) * (-1)^(i + j).
    """
    checked = 0
    failures = []
    for p in range(1, p_max + 1):
        cycles = [_cycle_to_end(i, p) for i in range(p + 1)]
        for arrangement in permutations(range(p + 1)):
            sigma = Permutation(list(arrangement))
            for i in range(p + 1):
                j = sigma(i)
                # sympy composes left to right: (x * y)(k) = y(x(k))
                tau = cycles[i] * sigma * ~cycles[j]
                ok = tau(p) == p and tau.signature() == sigma.signature() * (-1) ** (i + j)
                ok = ok and all(
                    sigma(cycles[i](k)) == cycles[j](tau(k)) for k in range(p)
                )
                checked += 1
                if not ok:
                    failures.append((p, tuple(sigma.array_form), i))
    return PermutationIdentityReport(checked, failures)


@dataclass
class PunctualReport:
    """Reduced homology of the open interval below a multiset."""

    multiset: Multiset
    reduced_betti: dict[int, int]
    expected_betti: dict[int, int]
    transpositions: dict[int, list[list[Fraction]]]

    @property
    def is_set(self) -> bool:
        return len(set(self.multiset)) == len(self.multiset)

    @property
    def passed(self) -> bool:
        if self.reduced_betti != self.expected_betti:
            return False
        return all(action == [[Fraction(-1)]] for action in self.transpositions.values())

    def to_dict(self) -> dict:
        return {
            "multiset": multiset_label(self.multiset),
            "reduced_betti": {str(k): v for k, v in self.reduced_betti.items()},
            "expected_betti": {str(k): v for k, v in self.expected_betti.items()},
            "transpositions": {
                str(i): [[str(x) for x in row] for row in action]
                for i, action in self.transpositions.items()
            },
            "passed": self.passed,
        }


def _swap_letters(label: str, first: str, second: str) -> str:
    swap = {first: second, second: first}
    return multiset_label(sorted(swap.get(x, x) for x in parse_multiset_label(label)))


def punctual_graded_check(t: Sequence[str]) -> PunctualReport:
    """Check the homology of the multisets strictly below t.

    A set of size k has one reduced class in degree k - 2 on which every
    adjacent transposition of its letters acts by -1. A multiset with a
    repeated letter has vanishing reduced homology.

    Raises:
        InvalidInputError: If t is empty or uses invalid letters.
    """
    if not t:
        raise InvalidInputError("Multiset must be non-empty")
    multiset = tuple(sorted(str(x) for x in t))
    letters = sorted(set(multiset))
    validate_alphabet(letters)
    ambient = symmetric(letters, len(multiset))
    below = interval(ambient, MINUS_INFINITY, multiset_label(multiset), open_low=True, open_high=True)
    below_nerve = nerve(below)
    reduced = betti(chain_complex(below_nerve), reduced=True)

    transpositions: dict[int, list[list[Fraction]]] = {}
    if len(letters) == len(multiset):
        expected = {len(multiset) - 2: 1}
        for i in range(len(letters) - 1):
            swap = {x: _swap_letters(x, letters[i], letters[i + 1]) for x in below}
            action = induced_map(swap, below, below, below_nerve, below_nerve, reduced=True)
            transpositions[i] = action.homology.get(len(multiset) - 2, [])
    else:
        expected = {}
    report = PunctualReport(multiset, reduced, expected, transpositions)
    logger.debug("Punctual check %s: betti=%s passed=%s", multiset, reduced, report.passed)
    return report
