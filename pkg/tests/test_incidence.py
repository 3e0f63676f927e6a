"""Tests for the incidence algebra and Mobius functions."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motivic_ie import families
from motivic_ie.errors import InvalidInputError
from motivic_ie.incidence import (
    IncidenceElement,
    comparable_pairs,
    compare_mobius,
    convolve,
    delta,
    mobius_by_inversion,
    mobius_topological,
    zeta,
)
from motivic_ie.motivic import LPoly
from motivic_ie.poset import FinitePoset


def _random_element(p: FinitePoset, seed: int) -> IncidenceElement:
    rng = np.random.default_rng(seed)
    return IncidenceElement(p, {pair: int(rng.integers(-3, 4)) for pair in comparable_pairs(p)})


class TestIncidenceElement:
    """Tests for incidence functions and convolution."""

    def test_rejects_incomparable_pair(self) -> None:
        """Should refuse values on incomparable pairs."""
        p = families.antichain(2)
        with pytest.raises(InvalidInputError, match="non-comparable"):
            IncidenceElement(p, {("a0", "a1"): 1})

    def test_delta_is_unit(self, diamond: FinitePoset) -> None:
        """Should leave zeta unchanged under convolution with delta."""
        z = zeta(diamond)
        assert delta(diamond) @ z == z
        assert z @ delta(diamond) == z

    def test_zeta_squared_counts_intervals(self, diamond: FinitePoset) -> None:
        """Should count the elements of each closed interval."""
        squared = zeta(diamond) @ zeta(diamond)
        assert squared("bottom", "top") == 4
        assert squared("left", "top") == 2

    def test_different_posets(self, diamond: FinitePoset) -> None:
        """Should refuse to convolve across posets."""
        with pytest.raises(InvalidInputError, match="different posets"):
            convolve(zeta(diamond), zeta(families.chain(2)))

    def test_table(self) -> None:
        """Should list comparable pairs with their values."""
        rows = zeta(families.chain(2)).table()
        assert {"a": "0", "b": "1", "value": 1} in rows
        assert len(rows) == 3

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(min_value=1, max_value=7), seed=st.integers(min_value=0, max_value=10_000))
    def test_associative(self, n: int, seed: int) -> None:
        """Should convolve associatively."""
        p = families.random_poset(n, 0.5, seed=seed)
        f, g, h = (_random_element(p, seed + i) for i in range(3))
        assert (f @ g) @ h == f @ (g @ h)


class TestMobius:
    """Tests for the two Mobius computations."""

    def test_chain(self) -> None:
        """Should give 1, -1, 0 along a chain."""
        mu = mobius_by_inversion(families.chain(3))
        assert (mu("0", "0"), mu("0", "1"), mu("0", "2")) == (1, -1, 0)

    def test_boolean(self) -> None:
        """Should give (-1)^n across B_n."""
        mu = mobius_by_inversion(families.boolean(3))
        assert mu("{}", "{1,2,3}") == -1
        assert mu("{1}", "{1,2}") == -1

    def test_divisors(self) -> None:
        """Should reproduce the number-theoretic Mobius function."""
        mu = mobius_topological(families.divisor_poset(12))
        assert mu("1", "12") == 0
        assert mu("1", "6") == 1
        assert mu("2", "6") == -1

    def test_inverse_of_zeta(self, diamond: FinitePoset) -> None:
        """Should satisfy mu * zeta = zeta * mu = delta."""
        mu = mobius_by_inversion(diamond)
        assert mu @ zeta(diamond) == delta(diamond)
        assert zeta(diamond) @ mu == delta(diamond)

    def test_coefficients_in_a_ring(self, diamond: FinitePoset) -> None:
        """Should accept a unit from another coefficient ring."""
        mu = mobius_by_inversion(diamond, one=LPoly.one())
        assert mu("bottom", "top") == 1
        assert mu("bottom", "left") == -1

    def test_methods_agree(self) -> None:
        """Should agree on a multiset poset."""
        comparison = compare_mobius(families.symmetric(["x", "y"], 3))
        assert comparison.agree
        assert comparison.disagreements == []

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(min_value=0, max_value=9), seed=st.integers(min_value=0, max_value=10_000))
    def test_methods_agree_on_random_posets(self, n: int, seed: int) -> None:
        """Should agree on random posets."""
        assert compare_mobius(families.random_poset(n, 0.35, seed=seed)).agree
