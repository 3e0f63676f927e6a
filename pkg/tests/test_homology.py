"""Tests for chain complexes, homology and spectral sequences."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motivic_ie import families, linalg, store
from motivic_ie.errors import CostGuardError, InvalidInputError
from motivic_ie.homology import (
    ChainComplexQ,
    ChainMap,
    FilteredChainComplexQ,
    betti,
    chain_complex,
    induced_map,
    is_quasi_isomorphism,
    mapping_cone,
    nerve_betti,
    rank_e1_report,
    rank_filtration,
    spectral_sequence,
)
from motivic_ie.guards import CostGuard
from motivic_ie.poset import FinitePoset, nerve


def _interval_complex() -> ChainComplexQ:
    """Two vertices joined by an edge."""
    d1 = linalg.from_entries({(0, 0): -1, (1, 0): 1}, 2, 1)
    return ChainComplexQ({0: ("u", "v"), 1: ("e",)}, {1: d1})


class TestChainComplexQ:
    """Tests for the chain complex container."""

    def test_rejects_bad_shape(self) -> None:
        """Should reject a boundary of the wrong shape."""
        with pytest.raises(InvalidInputError, match="shape"):
            ChainComplexQ({0: ("u",), 1: ("e",)}, {1: linalg.zeros(2, 1)})

    def test_rejects_nonzero_square(self) -> None:
        """Should reject d o d != 0."""
        d1 = linalg.from_entries({(0, 0): 1}, 1, 1)
        d2 = linalg.from_entries({(0, 0): 1}, 1, 1)
        with pytest.raises(InvalidInputError, match="not zero"):
            ChainComplexQ({0: ("a",), 1: ("b",), 2: ("c",)}, {1: d1, 2: d2})

    def test_betti_of_interval(self) -> None:
        """Should find one component and no loops."""
        c = _interval_complex()
        assert betti(c) == {0: 1}
        assert betti(c, reduced=True) == {}
        assert c.euler_characteristic() == 1

    def test_augmented_empty(self) -> None:
        """Should give the empty complex one reduced class in degree -1."""
        assert betti(ChainComplexQ({}), reduced=True) == {-1: 1}

    def test_euler_in_negative_degrees(self) -> None:
        """Should return an exact integer for complexes in negative degrees."""
        c = ChainComplexQ({-2: ("a",), -1: ("b", "c")})
        chi = c.euler_characteristic()
        assert chi == -1
        assert isinstance(chi, int)
        assert store.to_jsonable({"euler": chi}) == {"euler": -1}


class TestNerveHomology:
    """Tests for homology of order complexes."""

    def test_diamond_is_contractible(self, diamond: FinitePoset) -> None:
        """Should find a single class in degree 0."""
        assert nerve_betti(diamond) == {0: 1}
        assert nerve_betti(diamond, reduced=True) == {}

    def test_circle(self) -> None:
        """Should find a loop in the boundary of a triangle."""
        assert nerve_betti(families.configuration(["0", "1", "2"], 2)) == {0: 1, 1: 1}

    def test_sphere(self) -> None:
        """Should find the 2-sphere in the proper part of B_4."""
        proper = families.boolean(4).induced(
            x for x in families.boolean(4).elements if x not in ("{}", "{1,2,3,4}")
        )
        assert nerve_betti(proper, reduced=True) == {2: 1}

    def test_antichain(self) -> None:
        """Should count components of a discrete poset."""
        assert nerve_betti(families.antichain(3), reduced=True) == {0: 2}

    def test_matrix_guard(self, small_guard: CostGuard) -> None:
        """Should refuse boundary matrices above the byte guard."""
        with pytest.raises(CostGuardError):
            chain_complex(nerve(families.boolean(5)), small_guard)


class TestChainMaps:
    """Tests for chain maps, cones and quasi-isomorphisms."""

    def test_identity_is_quasi_isomorphism(self) -> None:
        """Should detect an acyclic cone for the identity."""
        c = _interval_complex()
        identity = ChainMap(
            c,
            c,
            {
                0: linalg.from_entries({(0, 0): 1, (1, 1): 1}, 2, 2),
                1: linalg.from_entries({(0, 0): 1}, 1, 1),
            },
        )
        assert identity.verify()
        assert betti(mapping_cone(identity)) == {}
        assert is_quasi_isomorphism(identity)

    def test_zero_map_is_not(self) -> None:
        """Should reject the zero map between non-acyclic complexes."""
        point = ChainComplexQ({0: ("p",)})
        zero = ChainMap(point, point, {})
        assert zero.verify()
        assert not is_quasi_isomorphism(zero)

    def test_non_chain_map(self) -> None:
        """Should notice a map that does not commute with d."""
        c = _interval_complex()
        f = ChainMap(c, c, {1: linalg.from_entries({(0, 0): 1}, 1, 1)})
        assert not f.verify()

    def test_induced_map_on_homology(self, diamond: FinitePoset) -> None:
        """Should send the class of a point to the class of a point."""
        bottom = diamond.induced(["bottom"])
        result = induced_map({"bottom": "bottom"}, bottom, diamond, reduced=False)
        assert result.homology == {0: [[1]]}

    def test_induced_map_rejects_order_reversal(self) -> None:
        """Should reject maps that are not order-preserving."""
        p = families.chain(2)
        with pytest.raises(InvalidInputError, match="order-preserving"):
            induced_map({"0": "1", "1": "0"}, p, p)

    def test_retraction_after_inclusion_is_identity(self) -> None:
        """Should act as the identity on the loop of the configuration poset."""
        letters = ["a", "b", "c"]
        sub = families.configuration(letters, 2)
        whole = families.symmetric(letters, 2)
        inclusion = induced_map({x: x for x in sub.elements}, sub, whole)
        retraction = induced_map(families.support_map(whole), whole, sub)
        assert set(inclusion.homology) == {1}
        for k, a in inclusion.homology.items():
            b = retraction.homology[k]
            product = [
                [sum(b[i][m] * a[m][j] for m in range(len(a))) for j in range(len(a[0]))]
                for i in range(len(b))
            ]
            assert product == [[1 if i == j else 0 for j in range(len(a[0]))] for i in range(len(b))]


class TestFilteredComplex:
    """Tests for filtrations and graded pieces."""

    def test_rejects_raising_filtration(self) -> None:
        """Should reject a filtration that d raises."""
        with pytest.raises(InvalidInputError, match="not by subcomplexes"):
            FilteredChainComplexQ(_interval_complex(), {0: (1, 0), 1: (0,)})

    def test_graded_pieces(self) -> None:
        """Should split a complex into its subquotients."""
        f = FilteredChainComplexQ(_interval_complex(), {0: (0, 1), 1: (1,)})
        assert f.bounds == (0, 1)
        assert f.graded_piece(0).bases == {0: ("u",)}
        assert betti(f.graded_piece(1)) == {}

    def test_rank_filtration_needs_rank(self) -> None:
        """Should reject an unranked poset."""
        with pytest.raises(InvalidInputError, match="ranked"):
            rank_filtration(families.random_poset(3, 0.5))


class TestSpectralSequence:
    """Tests for the rank spectral sequence."""

    def test_circle_pages(self) -> None:
        """Should cancel two of three pairs on the second page."""
        sequence = spectral_sequence(rank_filtration(families.configuration(["0", "1", "2"], 2)))
        assert sequence.e1.entries == {(1, 0): 3, (2, 1): 3}
        assert sequence.pages[1].entries == {(1, 0): 1, (2, 1): 1}
        assert sequence.converges
        assert sequence.consistent

    def test_euler_is_page_invariant(self, diamond: FinitePoset) -> None:
        """Should keep the Euler characteristic on every page."""
        sequence = spectral_sequence(rank_filtration(diamond))
        assert set(sequence.euler_by_page()) == {1}

    def test_dump(self) -> None:
        """Should key entries by filtration index and complementary degree."""
        data = spectral_sequence(rank_filtration(families.chain(2))).to_dict()
        assert data["pages"][0]["entries"] == {"0,0": 1}
        assert data["betti"] == {"0": 1}

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_cone_over_antichain(self, m: int) -> None:
        """Should put the empty chain at the cone point and one class per element above it."""
        p = families.cone(families.antichain(m))
        report = rank_e1_report(p)
        assert report.predicted == report.actual == {(-1, -1): 1, (0, 0): m}
        assert all(b == {-1: 1} for b in report.contributions.values())
        assert len(report.contributions) == m
        assert report.passed
        sequence = spectral_sequence(rank_filtration(p))
        assert sequence.pages[1].entries == ({(0, 0): m - 1} if m > 1 else {})
        assert sequence.betti == ({0: m - 1} if m > 1 else {})

    def test_cone_over_chain(self) -> None:
        """Should cancel the cone point against the bottom of the chain."""
        report = rank_e1_report(families.cone(families.chain(3)))
        assert report.actual == {(-1, -1): 1, (0, 0): 1}
        assert report.passed
        sequence = spectral_sequence(rank_filtration(families.cone(families.chain(3))))
        assert sequence.limit == {}

    def test_page_euler_is_integer(self) -> None:
        """Should give an integer Euler characteristic with a degree -1 entry."""
        sequence = spectral_sequence(rank_filtration(families.cone(families.antichain(3))))
        assert sequence.euler_by_page() == [2, 2]
        assert all(isinstance(chi, int) for chi in sequence.euler_by_page())

    def test_differentials_square_to_zero(self) -> None:
        """Should store d_1 matrices whose composite on E_1 vanishes."""
        sequence = spectral_sequence(rank_filtration(families.boolean(3, include_empty=False)))
        assert sequence.e1.entries == {(1, 0): 3, (2, 1): 3, (3, 2): 1}
        first = sequence.differential(1, 2, 1)
        second = sequence.differential(1, 3, 2)
        assert linalg.rank(first) == 2
        assert linalg.rank(second) == 1
        assert linalg.is_zero(linalg.matmul(first, second))
        for d in sequence.differentials:
            after = sequence.differential(d.r, d.p - d.r, d.n - 1)
            assert linalg.is_zero(linalg.matmul(after, d.matrix))
        assert sequence.pages[1].entries == {(1, 0): 1}
        assert sequence.consistent
        assert sequence.converges

    def test_differential_dump(self) -> None:
        """Should write each differential with its matrix in the page bases."""
        data = spectral_sequence(rank_filtration(families.boolean(3, include_empty=False))).to_dict()
        d = next(d for d in data["differentials"] if d["from"] == "2,-1")
        assert d["to"] == "1,-1"
        assert d["rank"] == 2
        assert len(d["matrix"]) == 3
        assert all(len(row) == 3 for row in d["matrix"])

    def test_rank_e1_on_circle(self) -> None:
        """Should predict E_1 from lower intervals."""
        report = rank_e1_report(families.configuration(["0", "1", "2"], 2))
        assert report.predicted == {(1, 0): 3, (2, 1): 3}
        assert report.passed

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(min_value=1, max_value=8), seed=st.integers(min_value=0, max_value=5000))
    def test_random_ranked_posets(self, n: int, seed: int) -> None:
        """Should pass the lower-interval check on random ranked posets."""
        assert rank_e1_report(families.random_poset(n, 0.4, seed=seed, ranked=True)).passed
