"""Tests for named poset families."""

from __future__ import annotations

import pytest

from motivic_ie import families
from motivic_ie.errors import InvalidInputError
from motivic_ie.poset import MINUS_INFINITY, PLUS_INFINITY


class TestLabels:
    """Tests for multiset labels."""

    def test_label_round_trip(self) -> None:
        """Should parse a label back into its letters."""
        assert families.parse_multiset_label(families.multiset_label(("a", "a", "b"))) == ("a", "a", "b")

    def test_empty_label(self) -> None:
        """Should parse the empty multiset."""
        assert families.parse_multiset_label("{}") == ()

    def test_rejects_unbraced(self) -> None:
        """Should reject labels without braces."""
        with pytest.raises(InvalidInputError):
            families.parse_multiset_label("a,b")

    def test_alphabet_validation(self) -> None:
        """Should reject empty, repeated and reserved letters."""
        for letters in ([], ["a", "a"], ["a{"], ["@"]):
            with pytest.raises(InvalidInputError):
                families.validate_alphabet(letters)


class TestBasicFamilies:
    """Tests for chains, antichains, Boolean lattices and divisors."""

    def test_chain(self) -> None:
        """Should build a ranked total order."""
        p = families.chain(3)
        assert p.leq("0", "2")
        assert p.rank == {"0": 0, "1": 1, "2": 2}

    def test_antichain(self) -> None:
        """Should build incomparable elements of rank 0."""
        p = families.antichain(3)
        assert not p.comparable("a0", "a1")

    def test_boolean_sizes(self) -> None:
        """Should have 2^n elements, or 2^n - 1 without the empty set."""
        assert len(families.boolean(4)) == 16
        assert len(families.boolean(4, include_empty=False)) == 15

    def test_divisors(self) -> None:
        """Should order divisors by divisibility and rank by prime factors."""
        p = families.divisor_poset(12)
        assert p.elements == ("1", "2", "3", "4", "6", "12")
        assert p.leq("2", "12")
        assert not p.leq("4", "6")
        assert p.rank["12"] == 3

    def test_negative_sizes(self) -> None:
        """Should reject negative sizes."""
        with pytest.raises(InvalidInputError):
            families.chain(-1)
        with pytest.raises(InvalidInputError):
            families.divisor_poset(0)


class TestMultisetFamilies:
    """Tests for configuration and symmetric posets."""

    def test_configuration(self) -> None:
        """Should list non-empty subsets up to the cutoff."""
        assert len(families.configuration(["0", "1", "2"])) == 7
        assert len(families.configuration(["0", "1", "2"], 2)) == 6

    def test_symmetric(self) -> None:
        """Should list multisets up to the cutoff, ordered with multiplicity."""
        p = families.symmetric(["x", "y"], 3)
        assert len(p) == 9
        assert p.leq("{x}", "{x,x,y}")
        assert not p.leq("{x,x}", "{x,y,y}")

    def test_symmetric_with_bottom(self) -> None:
        """Should adjoin a minimum ranked below everything."""
        p = families.symmetric(["x"], 2, bottom=True)
        assert p.elements[0] == MINUS_INFINITY
        assert p.rank[MINUS_INFINITY] == 0

    def test_support_map(self) -> None:
        """Should send multisets to their support sets."""
        support = families.support_map(families.symmetric(["x", "y"], 3))
        assert support["{x,x,y}"] == "{x,y}"
        assert support["{y,y}"] == "{y}"

    def test_cutoff_must_be_positive(self) -> None:
        """Should reject a zero cutoff."""
        with pytest.raises(InvalidInputError):
            families.symmetric(["x"], 0)


class TestConstructions:
    """Tests for joins, cones, unions and barycentric subdivision."""

    def test_join(self) -> None:
        """Should place every element of the first poset below the second."""
        p = families.join(families.antichain(2), families.chain(1))
        assert p.leq("a:a0", "b:0")
        assert p.rank == {"a:a0": 0, "a:a1": 0, "b:0": 1}

    def test_cone_and_cocone(self) -> None:
        """Should adjoin a minimum and a maximum."""
        p = families.cocone(families.antichain(2))
        assert p.elements[-1] == PLUS_INFINITY
        assert p.leq("a0", PLUS_INFINITY)

    def test_cone_twice(self) -> None:
        """Should refuse to adjoin a second cone point."""
        with pytest.raises(InvalidInputError, match="already contains"):
            families.cone(families.cone(families.chain(1)))

    def test_disjoint_union_is_fibered(self) -> None:
        """Should record each part as a fiber."""
        p = families.disjoint_union({"u": families.chain(2), "v": families.chain(1)})
        assert p.base == {"u:0": "u", "u:1": "u", "v:0": "v"}
        assert p.fibers() == {"u": ["u:0", "u:1"], "v": ["v:0"]}

    def test_cone_of_fibered_poset(self) -> None:
        """Should refuse to cone a fibered poset."""
        p = families.disjoint_union({"u": families.chain(1)})
        with pytest.raises(InvalidInputError, match="fiber by fiber"):
            families.cone(p)

    def test_barycentric(self) -> None:
        """Should list the strict chains of a two-element chain."""
        p = families.barycentric(families.chain(2))
        assert sorted(p.elements) == ["[0]", "[0|1]", "[1]"]
        assert p.leq("[0]", "[0|1]")


class TestRandomPosets:
    """Tests for seeded random posets."""

    def test_seed_is_reproducible(self) -> None:
        """Should produce the same order for the same seed."""
        a = families.random_poset(8, 0.4, seed=7)
        b = families.random_poset(8, 0.4, seed=7)
        assert (a.order == b.order).all()

    def test_ranked_by_height(self) -> None:
        """Should rank each element by the longest chain below it."""
        p = families.random_poset(10, 0.5, seed=3, ranked=True)
        for x in p.elements:
            below = p.strictly_below(x)
            assert p.rank[x] == max((p.rank[y] + 1 for y in below), default=0)

    def test_bad_probability(self) -> None:
        """Should reject probabilities outside [0, 1]."""
        with pytest.raises(InvalidInputError):
            families.random_poset(3, 1.5)


class TestBuildFamily:
    """Tests for the family registry."""

    def test_build_by_name(self) -> None:
        """Should build a family from keyword parameters."""
        assert len(families.build_family("boolean", {"n": 3})) == 8

    def test_unknown_family(self) -> None:
        """Should reject unknown names."""
        with pytest.raises(InvalidInputError, match="Unknown poset family"):
            families.build_family("lattice")

    def test_bad_parameters(self) -> None:
        """Should reject parameters the builder does not take."""
        with pytest.raises(InvalidInputError, match="Invalid parameters"):
            families.build_family("chain", {"length": 3})

    def test_nested_family(self) -> None:
        """Should build poset-valued parameters from nested family mappings."""
        p = families.build_family("cone", {"p": {"family": "antichain", "m": 2}})
        assert len(p) == 3
        assert MINUS_INFINITY in p

    def test_nested_family_parts(self) -> None:
        """Should build each named part of a disjoint union."""
        parts = {"x": {"family": "chain", "n": 2}, "y": {"family": "boolean", "n": 2}}
        assert len(families.build_family("disjoint_union", {"parts": parts})) == 6

    def test_string_for_poset_parameter(self) -> None:
        """Should reject a plain string where a poset is expected."""
        with pytest.raises(InvalidInputError, match="Invalid parameters for family barycentric"):
            families.build_family("barycentric", {"p": "x"})
