"""Tests for the verification suites."""

from __future__ import annotations

import pytest

from motivic_ie import checks
from motivic_ie.errors import CostGuardError, InvalidInputError, VerificationError
from motivic_ie.guards import CostGuard


class TestSuiteResult:
    """Tests for suite verdicts."""

    def test_dump_leaves_out_timing(self) -> None:
        """Should not write the elapsed time."""
        result = checks.SuiteResult("series", True, {"checked": 1}, seconds=2.5)
        assert result.to_dict() == {"name": "series", "passed": True, "details": {"checked": 1}}


class TestRunSuite:
    """Tests for running suites by name."""

    @pytest.mark.parametrize(
        "name", ["series", "koszul", "punctual", "stable-betti", "rank-ss", "contractibility"]
    )
    def test_suite_passes(self, name: str) -> None:
        """Should pass with no recorded failures."""
        result = checks.run_suite(name)
        assert result.passed, result.details
        assert result.details["failed"] == 0
        assert result.details["checked"] > 0
        assert result.seconds >= 0

    def test_vw_parameters(self) -> None:
        """Should run a single inversion case when q or N is given."""
        result = checks.run_suite("vw", q=3, N=3)
        assert result.passed
        assert result.details["checked"] == 1
        assert result.details["reports"][0]["predicted"] == [1, -3, 0, 0]

    def test_none_parameters_are_dropped(self) -> None:
        """Should ignore parameters left unset."""
        assert checks.run_suite("series", q=None, N=None).passed

    def test_unknown_suite(self) -> None:
        """Should reject unknown names."""
        with pytest.raises(InvalidInputError, match="Unknown suite"):
            checks.run_suite("everything")

    def test_unexpected_parameter(self) -> None:
        """Should reject parameters the suite does not take."""
        with pytest.raises(InvalidInputError, match="does not accept"):
            checks.run_suite("series", q=2)

    def test_strict_raises_on_failure(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Should raise instead of returning a failed verdict in strict mode."""
        failing = checks.SuiteResult("series", False, {"failures": ["P1"]})
        monkeypatch.setitem(checks.SUITES, "series", lambda guard: failing)
        assert checks.run_suite("series") is failing
        with pytest.raises(VerificationError, match="P1"):
            checks.run_suite("series", strict=True)

    def test_guard_is_applied(self) -> None:
        """Should pass the guard down to the computation."""
        with pytest.raises(CostGuardError):
            checks.run_suite("vw", CostGuard(max_vw_degree=2), q=2, N=3)


class TestRunAll:
    """Tests for running every suite."""

    def test_runs_suites_in_order(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Should return one verdict per suite in table order."""
        suites = {
            "first": lambda guard: checks.SuiteResult("first", True, {}),
            "second": lambda guard: checks.SuiteResult("second", False, {"failures": ["x"]}),
        }
        monkeypatch.setattr(checks, "SUITES", suites)
        results = checks.run_all()
        assert [r.name for r in results] == ["first", "second"]
        assert [r.passed for r in results] == [True, False]

    def test_strict_stops_at_first_failure(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Should raise on the first failed suite and skip the rest."""
        ran: list[str] = []

        def suite(name: str, passed: bool):
            def run(guard: CostGuard) -> checks.SuiteResult:
                ran.append(name)
                return checks.SuiteResult(name, passed, {"failures": [name]})

            return run

        monkeypatch.setattr(
            checks, "SUITES", {"a": suite("a", False), "b": suite("b", True)}
        )
        with pytest.raises(VerificationError, match="Suite a failed"):
            checks.run_all(strict=True)
        assert ran == ["a"]


class TestCorpora:
    """Tests for the standard corpora."""

    def test_koszul_corpus_is_exhaustive(self) -> None:
        """Should hold every small pure and mixed table, the random sample and the named ones."""
        names = [name for name, _ in checks.koszul_corpus()]
        pure = 7 + 28 + 84 + 210
        mixed = (49 - 7) + (1225 - 28)
        assert len(names) == pure + mixed + checks.RANDOM_KOSZUL_TABLES + 7
        assert len(set(names)) == len(names)

    def test_koszul_corpus_reaches_bounds(self) -> None:
        """Should include mixed weights and tables up to the largest total dimension."""
        tables = dict(checks.koszul_corpus())
        assert not tables["bidegrees((0, 3),)"].pure
        sampled = [v for name, v in tables.items() if name.startswith("random")]
        totals = {sum(v.dims.values()) for v in sampled}
        assert totals == set(range(3, checks.KOSZUL_MAX_TOTAL + 1))
        assert any(not v.pure for v in sampled)
        for v in sampled:
            assert all(0 <= d <= checks.KOSZUL_MAX_DEGREE and 0 <= w <= checks.KOSZUL_MAX_DEGREE for d, w in v.dims)

    def test_mobius_corpus_size(self) -> None:
        """Should include the seeded random posets."""
        names = [name for name, _ in checks.mobius_corpus()]
        assert sum(name.startswith("random") for name in names) == checks.RANDOM_MOBIUS_POSETS

    def test_series_corpus(self) -> None:
        """Should include P^1 x P^1."""
        assert checks.series_corpus()["P1xP1"].cells == (0, 1, 1, 2)
