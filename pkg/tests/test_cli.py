"""Tests for the command-line interface."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from motivic_ie import __version__, cli
from motivic_ie.errors import CostGuardError, VerificationError


def _run(capsys: pytest.CaptureFixture[str], *args: str) -> dict:
    cli.main(list(args))
    return json.loads(capsys.readouterr().out)


def _exit_code(*args: str) -> int:
    with pytest.raises(SystemExit) as exc_info:
        cli.main(list(args))
    return exc_info.value.code


class TestPosetCommands:
    """Tests for mobius, nerve and spectral sequence commands."""

    def test_mobius(self, capsys: pytest.CaptureFixture[str], poset_file: Path) -> None:
        """Should compare both Mobius computations on a file."""
        report = _run(capsys, "mobius", "--poset", str(poset_file))
        assert report["command"] == "mobius"
        assert report["version"] == __version__
        assert report["passed"] is True
        assert {"a": "bottom", "b": "top", "value": 1} in report["mobius"]

    def test_mobius_single_method(self, capsys: pytest.CaptureFixture[str], poset_file: Path) -> None:
        """Should skip the comparison for a single method."""
        report = _run(capsys, "mobius", "--poset", str(poset_file), "--method", "inversion")
        assert "passed" not in report

    def test_nerve_of_family(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should build a named family from key=value parameters."""
        report = _run(capsys, "nerve", "--family", "configuration", "--param", "letters=[a, b, c]", "--param", "k=2")
        assert report["betti"] == {"0": 1, "1": 1}
        assert report["euler_characteristic"] == 0
        assert report["center"] is None

    def test_ss_rank(self, capsys: pytest.CaptureFixture[str], poset_file: Path) -> None:
        """Should report the lower-interval check."""
        report = _run(capsys, "ss-rank", "--poset", str(poset_file))
        assert report["passed"] is True
        assert report["spectral_sequence"]["betti"] == {"0": 1}

    def test_skeletal_compare(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should compare the complexes over a small alphabet."""
        report = _run(capsys, "ss-skeletal-compare", "--alphabet", "2", "--cutoff", "3")
        assert report["alphabet"] == ["a", "b"]
        assert report["passed"] is True

    def test_random_family_uses_seed(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should seed the random family from --seed."""
        first = _run(capsys, "nerve", "--family", "random", "--param", "n=7", "--seed", "5")
        second = _run(capsys, "nerve", "--family", "random", "--param", "n=7", "--param", "seed=5")
        assert first == second

    def test_missing_poset(self) -> None:
        """Should exit 2 without a poset or family."""
        assert _exit_code("nerve") == cli.EXIT_INVALID_INPUT

    def test_family_with_wrong_parameter_type(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should exit 2 with a message when a poset parameter is given a string."""
        assert _exit_code("nerve", "--family", "barycentric", "--param", "p=x") == cli.EXIT_INVALID_INPUT
        assert "Invalid parameters for family barycentric" in capsys.readouterr().err

    def test_nested_family_parameter(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should build a poset-valued parameter from a nested family mapping."""
        report = _run(capsys, "nerve", "--family", "cone", "--param", "p={family: antichain, m: 2}")
        assert report["elements"] == 3
        assert report["betti"] == {"0": 1}
        assert report["euler_characteristic"] == 1


class TestSeriesCommands:
    """Tests for zeta, inverse zeta and stable values."""

    def test_zeta_specialized(self, capsys: pytest.CaptureFixture[str], p1_file: Path) -> None:
        """Should specialize the zeta function of P^1 at q = 2."""
        report = _run(capsys, "zeta", "--variety", str(p1_file), "-N", "5", "--specialize-q", "2")
        assert report["specialized"] == [1, 3, 7, 15, 31, 63]
        assert report["series"]["display"][1] == "1 + L"

    def test_zeta_invert(self, capsys: pytest.CaptureFixture[str], p1_file: Path) -> None:
        """Should agree with the composition sums."""
        report = _run(capsys, "zeta-invert", "--variety", str(p1_file), "-N", "4", "--specialize-q", "3")
        assert report["passed"] is True
        assert report["specialized"] == [1, -4, 3, 0, 0]
        assert report["configurations"]["specialized"][2] == 9

    def test_stable_limit(self, capsys: pytest.CaptureFixture[str], p1_file: Path) -> None:
        """Should give the exact value and its specialization."""
        report = _run(capsys, "stable-limit", "--variety", str(p1_file), "-n", "2", "--specialize-q", "2")
        assert report["value"]["exact"] is True
        assert report["value"]["terms"] == {"-3": 1, "-2": -1, "-1": -1, "0": 1}
        assert report["specialized"] == [3, 8]

    def test_stable_betti_from_cohomology(
        self, capsys: pytest.CaptureFixture[str], p1_cohomology_file: Path
    ) -> None:
        """Should read a cohomology table and the dimension."""
        report = _run(
            capsys, "stable-betti", "--variety-cohomology", str(p1_cohomology_file), "--dim", "1", "--kmax", "2"
        )
        assert report["poincare"] == {"0": 1, "1": 1, "3": 1, "4": 1}

    def test_stable_betti_from_variety(self, capsys: pytest.CaptureFixture[str], p1_file: Path) -> None:
        """Should default the rank bound to the number of classes."""
        report = _run(capsys, "stable-betti", "--variety", str(p1_file))
        assert report["k_max"] == 2
        assert report["euler_polynomial"] == {"-3": 1, "-2": -1, "-1": -1, "0": 1}

    def test_missing_precision(self, p1_file: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Should exit 2 and name the missing flag."""
        assert _exit_code("zeta", "--variety", str(p1_file)) == cli.EXIT_INVALID_INPUT
        assert "-N" in capsys.readouterr().err


class TestCountCommands:
    """Tests for finite-field oracles."""

    def test_squarefree(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should count squarefree cubics over F_2."""
        report = _run(capsys, "count", "--oracle", "squarefree", "--q", "2", "--d", "3")
        assert report["count"] == 4

    def test_configurations(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should count configurations on A^1 and P^1."""
        report = _run(capsys, "count", "--oracle", "configurations", "--q", "2", "--d", "3")
        assert (report["count"], report["count_p1"]) == (4, 6)

    def test_colored(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should parse comma-separated parts."""
        report = _run(capsys, "count", "--oracle", "colored", "--q", "3", "--parts", "1,1")
        assert report["parts"] == [1, 1]
        assert report["count"] == 6

    def test_residual(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should report the truncated sum and the residual."""
        report = _run(capsys, "count", "--oracle", "residual", "--q", "2", "--d", "3", "--k", "1")
        assert report["truncated_sum"] == 12
        assert report["residual"] == -2

    def test_density(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should report where densities reach the stable value."""
        report = _run(capsys, "density", "--q", "2", "--dmax", "4")
        assert report["limit"] == [3, 8]
        assert report["exact_from"] == 3

    def test_colored_needs_parts(self) -> None:
        """Should exit 2 without --parts."""
        assert _exit_code("count", "--oracle", "colored", "--q", "2") == cli.EXIT_INVALID_INPUT

    def test_non_prime(self) -> None:
        """Should exit 2 for a composite field size."""
        assert _exit_code("count", "--oracle", "squarefree", "--q", "4", "--d", "2") == cli.EXIT_INVALID_INPUT

    def test_cost_guard(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should exit 3 when the enumeration guard trips."""
        code = _exit_code("count", "--oracle", "squarefree", "--q", "2", "--d", "20", "--max-enumeration", "100")
        assert code == cli.EXIT_COST_GUARD
        assert "limit is 100" in capsys.readouterr().err


class TestCheckCommand:
    """Tests for running suites from the command line."""

    def test_single_suite(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should run one suite and report its verdict."""
        report = _run(capsys, "check", "series")
        assert report["passed"] is True
        assert [s["name"] for s in report["suites"]] == ["series"]

    def test_vw_parameters(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should pass --q and -N to the inversion suite."""
        report = _run(capsys, "check", "vw", "--q", "2", "-N", "3")
        assert report["suites"][0]["details"]["checked"] == 1

    def test_unknown_suite(self) -> None:
        """Should let argparse reject unknown suites."""
        assert _exit_code("check", "everything") == 2


class TestMain:
    """Tests for output handling and exit codes."""

    def test_no_command(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Should print help and exit 1."""
        assert _exit_code() == 1
        assert "motivic-ie" in capsys.readouterr().out

    def test_table_format(self, capsys: pytest.CaptureFixture[str], p1_file: Path) -> None:
        """Should render nested reports as indented lines."""
        cli.main(["zeta", "--variety", str(p1_file), "-N", "1", "--format", "table"])
        out = capsys.readouterr().out
        assert "command: zeta" in out
        assert "series:" in out
        assert "  precision: 1" in out

    def test_output_file(self, capsys: pytest.CaptureFixture[str], temp_dir: Path, p1_file: Path) -> None:
        """Should write the report to a file instead of stdout."""
        target = temp_dir / "out" / "zeta.json"
        cli.main(["zeta", "--variety", str(p1_file), "-N", "2", "--output", str(target)])
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text())["series"]["precision"] == 2

    def test_deterministic_output(self, capsys: pytest.CaptureFixture[str], p1_file: Path) -> None:
        """Should print byte-identical reports for identical runs."""
        args = ["zeta-invert", "--variety", str(p1_file), "-N", "3"]
        cli.main(args)
        first = capsys.readouterr().out
        cli.main(args)
        assert capsys.readouterr().out == first

    def test_bad_parameter(self) -> None:
        """Should exit 2 for a malformed family parameter."""
        assert _exit_code("nerve", "--family", "chain", "--param", "n3") == cli.EXIT_INVALID_INPUT

    def test_bad_environment(self, monkeypatch: pytest.MonkeyPatch, p1_file: Path) -> None:
        """Should exit 2 for an invalid format in the environment."""
        monkeypatch.setenv("MOTIVIC_IE_FORMAT", "xml")
        assert _exit_code("zeta", "--variety", str(p1_file), "-N", "1") == cli.EXIT_INVALID_INPUT

    def test_failed_verification(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Should exit 1 when a report says it did not pass."""
        monkeypatch.setitem(cli.COMMANDS, "nerve", lambda config: {"passed": False})
        assert _exit_code("nerve") == cli.EXIT_VERIFICATION_FAILED

    def test_exit_code_comes_from_error(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Should exit with the code carried by the raised error."""

        def fail(config: object) -> dict:
            raise CostGuardError("too big")

        monkeypatch.setitem(cli.COMMANDS, "nerve", fail)
        assert _exit_code("nerve") == CostGuardError.exit_code == 3

    def test_verification_error_exits_one(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Should exit 1 for errors without a more specific code."""

        def fail(config: object) -> dict:
            raise VerificationError("identity failed")

        monkeypatch.setitem(cli.COMMANDS, "nerve", fail)
        assert _exit_code("nerve") == VerificationError.exit_code == 1
