import json

import pandas as pd
import pytest

from brauerlab.main import EXIT_FAILED, EXIT_INPUT, EXIT_OK, build_parser, main


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParser:
    """Test the argument parser surface."""

    def test_all_commands_installed(self):
        """Test every command is a subcommand."""
        parser = build_parser()
        actions = [a for a in parser._actions if a.dest == "command"]
        assert set(actions[0].choices) == {
            "valuation", "as-reduce", "division-check", "symlen",
            "linkage-quad", "linkage-bilinear", "common-factor", "report-all",
        }

    def test_unknown_command(self):
        """Test argparse exits with status 2 on unknown commands."""
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 2

    def test_bad_choice(self):
        """Test argparse rejects an unknown --expect value."""
        with pytest.raises(SystemExit) as excinfo:
            main(["division-check", "--class", "1", "--expect", "maybe"])
        assert excinfo.value.code == 2


class TestValuation:
    """Test the valuation command."""

    def test_valuation(self, capsys):
        """Test the outer variable dominates."""
        code, out, _ = run_cli(capsys, "valuation", "--n", "2", "--expr", "a1 + a2^-1")
        assert code == EXIT_OK
        assert "valuation = (0, -1)  [computed]" in out
        assert "leading_term = a2^-1  [computed]" in out
        assert "p_rank = 2  [formula]" in out

    def test_invert(self, capsys):
        """Test inversion inside the window."""
        code, out, _ = run_cli(capsys, "valuation", "--n", "1", "--window", "0..3", "--expr", "1 + a1", "--invert")
        assert code == EXIT_OK
        assert "inverse = 1 + a1 + a1^2 + a1^3  [computed]" in out
        assert "note: inverse truncated to window 0..3" in out

    def test_parse_error(self, capsys):
        """Test malformed expressions exit with 2."""
        code, _, err = run_cli(capsys, "valuation", "--n", "1", "--expr", "a1 +")
        assert code == EXIT_INPUT
        assert err.startswith("error: unexpected end of input")


class TestASReduce:
    """Test the as-reduce command."""

    def test_single_element(self, capsys):
        """Test t^-2 reduces to t^-1."""
        code, out, _ = run_cli(capsys, "as-reduce", "--base", "F2(t)", "--expr", "t^-2")
        assert code == EXIT_OK
        assert "canonical = t^-1  [computed]" in out
        assert "in_image = False  [computed]" in out
        assert "cokernel_dim = infinite  [formula]" in out

    def test_dependent_pair(self, capsys):
        """Test two dependent elements give a split twisted algebra."""
        code, out, _ = run_cli(capsys, "as-reduce", "--base", "F2(t)", "--expr", "t^-1", "--expr", "t^-2")
        assert code == EXIT_OK
        assert "canonical[2] = t^-1  [computed]" in out
        assert "witness: β1 + β2 = ℘(t^-1)" in out

    def test_algebraically_closed_rejected(self, capsys):
        """Test a symbolic base has no elements to reduce."""
        code, _, err = run_cli(capsys, "as-reduce", "--base", "algebraically-closed", "--expr", "1")
        assert code == EXIT_INPUT
        assert "concrete base field" in err


class TestDivisionCheck:
    """Test the division-check command and its exit codes."""

    def test_chain(self, capsys):
        """Test the three-variable chain and the non-linkage note."""
        code, out, _ = run_cli(capsys, "division-check", "--class", "[a2^-1, a1) * [a3^-1, a2)", "--expect", "division")
        assert code == EXIT_OK
        assert ": Division" in out
        assert "degree = 4  [computed]" in out
        assert "is not linked" in out

    def test_expectation_mismatch(self, capsys):
        """Test a wrong expectation exits with 1."""
        code, out, _ = run_cli(capsys, "division-check", "--n", "2", "--class", "[a2^-1, a1)", "--expect", "not-division")
        assert code == EXIT_FAILED
        assert "note: expected NotDivision, got Division" in out

    def test_unknown_without_expectation(self, capsys):
        """Test Unknown exits with 1 when no expectation is given."""
        code, out, _ = run_cli(capsys, "division-check", "--n", "1", "--class", "[1, a1 + 1)")
        assert code == EXIT_FAILED
        assert "Unknown" in out

    def test_unknown_expected(self, capsys):
        """Test Unknown can be expected explicitly."""
        code, _, _ = run_cli(capsys, "division-check", "--n", "1", "--class", "[1, a1 + 1)", "--expect", "unknown")
        assert code == EXIT_OK

    def test_trivial_class(self, capsys):
        """Test the empty class is reported split."""
        code, out, _ = run_cli(capsys, "division-check", "--class", "1")
        assert code == EXIT_OK
        assert "NotDivision (trivial class (split))" in out

    def test_unterminated_symbol(self, capsys):
        """Test parse errors exit with 2."""
        code, _, err = run_cli(capsys, "division-check", "--class", "[a1, a2")
        assert code == EXIT_INPUT
        assert "unterminated" in err or "expected" in err


class TestSymlen:
    """Test the symlen command."""

    def test_algebraically_closed(self, capsys):
        """Test n - 1 with a chain witness."""
        code, out, _ = run_cli(capsys, "symlen", "--base", "algebraically-closed", "--n", "4")
        assert code == EXIT_OK
        assert "symbol_length = 3  [formula]" in out
        assert "upper_bound = 3  [bound]" in out
        assert "[a2^-1, a1) * [a3^-1, a2) * [a4^-1, a3): Division" in out

    def test_rational_function_field(self, capsys):
        """Test n with independent poles."""
        code, out, _ = run_cli(capsys, "symlen", "--base", "F2(t)", "--n", "2")
        assert code == EXIT_OK
        assert "symbol_length = 2  [formula]" in out
        assert "base_perfect = False  [computed]" in out

    def test_characteristic_mismatch(self, capsys):
        """Test p must match the base field."""
        code, _, err = run_cli(capsys, "symlen", "--base", "F2", "--p", "3")
        assert code == EXIT_INPUT
        assert "characteristic" in err


class TestLinkage:
    """Test the linkage commands."""

    def test_quadratic(self, capsys):
        """Test omega is certified anisotropic for n = 2."""
        code, out, _ = run_cli(capsys, "linkage-quad", "--n", "2")
        assert code == EXIT_OK
        assert "omega_dimension = 6  [computed]" in out
        assert "linked = False  [computed]" in out

    def test_quadratic_brute_force(self, capsys):
        """Test a budgeted search finds nothing."""
        code, out, _ = run_cli(
            capsys, "linkage-quad", "--n", "2", "--brute-force", "--window=-1..1", "--budget", "300"
        )
        assert code == EXIT_OK
        assert "evaluations = 300  [computed]" in out

    def test_quadratic_odd_characteristic(self, capsys):
        """Test quadratic forms need characteristic 2."""
        code, _, _ = run_cli(capsys, "linkage-quad", "--n", "2", "--base", "F3", "--p", "3")
        assert code == EXIT_INPUT

    def test_bilinear(self, capsys):
        """Test the pure subforms meet trivially for n = 2."""
        code, out, _ = run_cli(capsys, "linkage-bilinear", "--n", "2", "--window=-1..1")
        assert code == EXIT_OK
        assert "intersection_dim = 0  [computed]" in out
        assert "expected_dim = 0  [formula]" in out
        assert ": not linked" in out


class TestCommonFactor:
    """Test the common-factor command."""

    def test_shared_slot(self, capsys):
        """Test <<a1, a2>> and <<a2, a3>> share <<a2>>."""
        code, out, _ = run_cli(
            capsys, "common-factor", "--base", "F3", "--p", "3", "--phi", "<<a1, a2>>", "--psi", "<<a2, a3>>"
        )
        assert code == EXIT_OK
        assert "witness: <<a2>>" in out

    def test_no_common_factor(self, capsys):
        """Test disjoint square classes exit with 1."""
        code, out, _ = run_cli(
            capsys, "common-factor", "--base", "F3", "--p", "3", "--n", "4",
            "--phi", "<<a1, a2>>", "--psi", "<<a3, a4>>",
        )
        assert code == EXIT_FAILED
        assert "no common factor" in out

    def test_trials(self, capsys):
        """Test random anisotropic pairs always share a factor."""
        code, out, _ = run_cli(capsys, "common-factor", "--base", "F3", "--p", "3", "--trials", "25")
        assert code == EXIT_OK
        assert "failures = 0  [computed]" in out

    @pytest.mark.parametrize("extra", [
        ["--phi", "<<a1, a2>>"],
        ["--phi", "<<a1 + 1, a2>>", "--psi", "<<a2, a3>>"],
        ["--n", "2", "--trials", "5"],
    ])
    def test_input_errors(self, capsys, extra):
        """Test missing forms, non-monomial slots and small towers."""
        code, _, _ = run_cli(capsys, "common-factor", "--base", "F3", "--p", "3", *extra)
        assert code == EXIT_INPUT


class TestRunConfigErrors:
    """Test invalid run configurations exit with 2."""

    @pytest.mark.parametrize("flags", [
        ["--p", "4"],
        ["--base", "F6"],
        ["--window", "3..1"],
        ["--budget", "0"],
        ["--n", "-1"],
    ])
    def test_invalid(self, capsys, flags):
        """Test each invalid flag."""
        code, _, err = run_cli(capsys, "valuation", "--expr", "1", *flags)
        assert code == EXIT_INPUT
        assert err.startswith("error:")


class TestStructuredOutput:
    """Test the structured report format."""

    def test_deterministic(self, capsys):
        """Test identical runs give identical reports apart from the duration."""
        argv = ["division-check", "--format", "structured", "--class", "[a2^-1, a1) * [a3^-1, a2)"]
        reports = []
        for _ in range(2):
            code, out, _ = run_cli(capsys, *argv)
            assert code == EXIT_OK
            data = json.loads(out)
            data.pop("duration_s")
            reports.append(data)
        assert reports[0] == reports[1]
        assert reports[0]["verdicts"][0]["status"] == "Division"
        assert reports[0]["passed"] is True


class TestReportAll:
    """Test the report-all command."""

    def test_small_run_with_csv(self, capsys, tmp_path):
        """Test a small configuration passes and writes one CSV row per item."""
        path = tmp_path / "items.csv"
        code, out, _ = run_cli(capsys, "report-all", "--n", "2", "--budget", "2000", "--csv", str(path))
        assert code == EXIT_OK
        assert "result: PASS" in out
        table = pd.read_csv(path)
        assert list(table.columns) == ["item", "status", "detail", "duration_s"]
        assert "chain-division" in set(table["item"])
        assert set(table["status"]) == {"pass"}
