import json

import numpy as np
import pytest
from click.testing import CliRunner

from levi_civita_cli import __version__
from levi_civita_cli.cli import EXIT_FAIL, EXIT_INVALID, EXIT_PASS, WorkbenchCommand, main, run
from levi_civita_cli.config import Config
from levi_civita_cli.utils.schemas import SchemaLoader

from .test_utils import FileManager, p

BINOMIAL_SPEC = json.dumps({"d": 1, "pairs": [{"b": 1, "c": 1}]})
TWO_SUMMAND_SPEC = json.dumps({"d": 1, "pairs": [{"c": 1}, {"c": 2}]})


def solution_doc(**document) -> str:
    return json.dumps(document)


class TestCLI:
    """Test cases for the command-line surface."""

    def setup_method(self):
        self.runner = CliRunner()

    def invoke_json(self, args: list[str]):
        result = self.runner.invoke(main, [*args, "--json"])
        report = json.loads(result.stdout) if result.exit_code in (EXIT_PASS, EXIT_FAIL) else None
        if report is not None:
            SchemaLoader.validate(report, "report")
        return result, report

    def test_help_command(self):
        """Test --help lists the subcommands."""
        result = self.runner.invoke(main, ["--help"])
        assert result.exit_code == 0
        for name in ("validate", "separate", "verify", "reduce", "check", "fit", "residual", "closure", "suite"):
            assert name in result.output

    def test_version_command(self):
        """Test --version prints the package version."""
        result = self.runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_validate_pass(self):
        result, report = self.invoke_json(["validate", "--spec", TWO_SUMMAND_SPEC])
        assert result.exit_code == EXIT_PASS
        assert report["passed"]
        assert report["details"]["kernel_identity"] is True

    def test_validate_fail(self):
        spec = json.dumps({"d": 1, "pairs": [{"c": 1}, {"c": 1}]})
        result, report = self.invoke_json(["validate", "--spec", spec, "--profile", "thm2.2"])
        assert result.exit_code == EXIT_FAIL
        assert "c_1 - c_2 is singular" in report["summary"]

    def test_separate_reports_rank(self):
        result, report = self.invoke_json(
            ["separate", "--spec", BINOMIAL_SPEC, "--solution", solution_doc(f=["x1^2"])]
        )
        assert result.exit_code == EXIT_PASS
        assert report["details"]["rank"] == 3

    def test_verify_with_witness(self):
        sol = solution_doc(f=["x1^2"], W=["x1^2", "1"])
        result, report = self.invoke_json(["verify", "--spec", BINOMIAL_SPEC, "--solution", sol])
        assert result.exit_code == EXIT_FAIL
        witness = report["details"]["membership"]["witness"]
        assert witness["y_atom"] == "y1"
        assert witness["residual"] == "2*x1"

    def test_verify_defaults_to_minimal_form(self):
        result, report = self.invoke_json(
            ["verify", "--spec", BINOMIAL_SPEC, "--solution", solution_doc(f=["x1*exp(x1)"])]
        )
        assert result.exit_code == EXIT_PASS
        assert report["details"]["W_source"] == "minimal separated form"

    def test_verify_with_remainder(self):
        sol = solution_doc(f=["x1*exp(x1)"], W=[], R=[{"y": 1, "generators": ["exp(x1)", "x1*exp(x1)"]}])
        result, report = self.invoke_json(["verify", "--spec", BINOMIAL_SPEC, "--solution", sol])
        assert result.exit_code == EXIT_PASS
        assert report["details"]["remainder"]["samples"][0]["closure_dim"] == 2

    def test_reduce_once(self):
        sol = solution_doc(f=["x1^2", "x1^2"], W=["x1^2", "x1", "1"])
        result, report = self.invoke_json(
            ["reduce", "--spec", TWO_SUMMAND_SPEC, "--solution", sol, "--h", "1", "--once"]
        )
        assert result.exit_code == EXIT_PASS
        step = report["details"]["chain"][0]
        assert step["solution"]["f"] == ["-2*x1 + 1"]
        assert step["step"]["pivot"] == 1

    def test_reduce_hypothesis_violation_is_invalid_input(self):
        spec = json.dumps({"d": 1, "pairs": [{"c": 1}, {"c": 1}]})
        sol = solution_doc(f=["x1^2", "x1^2"])
        result = self.runner.invoke(main, ["reduce", "--spec", spec, "--solution", sol])
        assert result.exit_code == EXIT_INVALID

    def test_check_frechet_fails(self):
        result, report = self.invoke_json(["check", "--kind", "frechet", "--f", "x1^3", "--order", "3"])
        assert result.exit_code == EXIT_FAIL
        assert report["details"]["trials"][0]["residual"] == "6"

    def test_check_frechet_passes(self):
        result, _ = self.invoke_json(["check", "-k", "frechet", "--f", "x1^2", "--order", "3"])
        assert result.exit_code == EXIT_PASS

    def test_check_kakutani(self):
        result, report = self.invoke_json(["check", "-k", "kakutani", "--f", "x1^2 + x2^2", "--sample", "0,0;1,0"])
        assert result.exit_code == EXIT_FAIL
        assert report["details"]["max_residual"] == pytest.approx(1.0)

    def test_check_kakutani_roots_order(self):
        args = ["check", "-k", "kakutani", "--f", "x1^2 - x2^2", "--sample", "0,0;1,0"]
        result, _ = self.invoke_json([*args, "--roots-order", "4"])
        assert result.exit_code == EXIT_PASS
        result, report = self.invoke_json([*args, "--roots-order", "2"])
        assert result.exit_code == EXIT_FAIL
        assert report["details"]["max_residual"] == pytest.approx(1.0)

    def test_single_letter_bound_flags_rejected(self):
        result = self.runner.invoke(main, ["check", "-k", "ghurye-olkin", "--r", "2"])
        assert result.exit_code == 2
        assert "No such option" in result.output

    def test_check_wilson(self):
        result, report = self.invoke_json(
            ["check", "-k", "wilson", "--alphas", "1,1", "--betas", "1,-1", "--f", "x1^2", "--f", "x1^2"]
        )
        assert result.exit_code == EXIT_PASS
        assert report["details"]["g"] == "2*y1^2"

    def test_check_skitovich(self):
        spec = json.dumps({"d": 1, "pairs": [{"c": 1}, {"c": -1}]})
        result, _ = self.invoke_json(
            ["check", "-k", "skitovich", "--spec", spec, "--solution", solution_doc(f=["x1^2", "x1^2"])]
        )
        assert result.exit_code == EXIT_PASS

    def test_check_ghurye_olkin(self):
        spec = json.dumps({"d": 1, "pairs": [{"c": 1}, {"c": -1}]})
        args = ["check", "-k", "ghurye-olkin", "--spec", spec, "--solution", solution_doc(f=["x1^4", "x1^4"])]
        result, report = self.invoke_json([*args, "--x-degree", "2", "--y-degree", "2"])
        assert result.exit_code == EXIT_PASS
        assert report["details"]["B"] == "2*x1^4"

    def test_fit_from_expression(self):
        result, report = self.invoke_json(["fit", "--f", "2*exp(x1) + x1", "--freq", "1:0", "--freq", "0:1"])
        assert result.exit_code == EXIT_PASS
        assert p(report["details"]["fit"]) == p("2*exp(x1) + x1")

    def test_fit_from_csv(self):
        points = np.linspace(0.0, 1.0, 20).reshape(-1, 1)
        values = 3 * points[:, 0] + 0j
        with FileManager() as fm:
            path = fm.create_csv(points, values)
            result, report = self.invoke_json(["fit", "--csv", str(path), "--freq", "0:1"])
        assert result.exit_code == EXIT_PASS
        assert report["details"]["fit"] == "3*x1"

    def test_residual_uses_exact_rank(self):
        result, report = self.invoke_json(
            ["residual", "--spec", BINOMIAL_SPEC, "--solution", solution_doc(f=["x1^2"])]
        )
        assert result.exit_code == EXIT_PASS
        assert report["details"]["rank"] == 3

    def test_residual_too_small_rank_fails(self):
        args = ["residual", "--spec", BINOMIAL_SPEC, "--solution", solution_doc(f=["x1^2"]), "--rank", "2"]
        result, _ = self.invoke_json(args)
        assert result.exit_code == EXIT_FAIL

    def test_closure(self):
        result, report = self.invoke_json(["closure", "--f", "x1*exp(2*x1) + 1"])
        assert result.exit_code == EXIT_PASS
        assert report["details"]["dimension"] == 3

    def test_suite(self):
        result, report = self.invoke_json(["--seed", "3", "suite", "--name", "operator_algebra", "--count", "3"])
        assert result.exit_code == EXIT_PASS
        assert report["details"]["seed"] == 3
        assert report["details"]["suites"][0]["total"] == 3

    def test_suite_concurrency_limit(self):
        result = self.runner.invoke(main, ["suite", "--concurrency", "1000"])
        assert result.exit_code == 1
        assert "exceeds maximum limit" in result.output

    def test_parse_error_is_invalid_input(self):
        result = self.runner.invoke(main, ["closure", "--f", "x1 + $"])
        assert result.exit_code == EXIT_INVALID
        assert "line 1" in result.output

    def test_schema_violation_is_invalid_input(self):
        result = self.runner.invoke(main, ["validate", "--spec", json.dumps({"d": 0, "pairs": []})])
        assert result.exit_code == EXIT_INVALID

    def test_missing_document_is_invalid_input(self):
        result = self.runner.invoke(main, ["separate", "--spec", BINOMIAL_SPEC])
        assert result.exit_code == EXIT_INVALID
        assert "--solution" in result.output

    def test_spec_from_file(self):
        with FileManager() as fm:
            path = fm.create_json({"d": 1, "pairs": [{"c": 1}, {"c": 2}]})
            result, _ = self.invoke_json(["validate", "--spec", str(path)])
        assert result.exit_code == EXIT_PASS

    def test_text_output(self):
        result = self.runner.invoke(main, ["closure", "--f", "x1^2"])
        assert result.exit_code == EXIT_PASS
        assert "Result: PASS" in result.stdout

    def test_markdown_output_file(self):
        with self.runner.isolated_filesystem():
            result = self.runner.invoke(main, ["closure", "--f", "x1^2", "-o", "markdown", "--output-file", "out/report.md"])
            assert result.exit_code == EXIT_PASS
            with open("out/report.md", encoding="utf-8") as f:
                assert f.read().startswith("# Levi-Civita Workbench: closure")

    def test_invalid_config_file(self):
        with self.runner.isolated_filesystem():
            with open("bad.yaml", "w", encoding="utf-8") as f:
                f.write("max_concurrency: 0\n")
            result = self.runner.invoke(main, ["--config", "bad.yaml", "closure", "--f", "x1"])
        assert result.exit_code == EXIT_INVALID
        assert "Invalid configuration" in result.output


class TestRun:
    """The programmatic entry point behind the CLI."""

    def test_exit_codes(self):
        config = Config()
        code, report = run(WorkbenchCommand("closure", {}, {"f": ["x1^2"]}), config)
        assert code == EXIT_PASS
        assert report["details"]["dimension"] == 3

        code, report = run(WorkbenchCommand("check", {}, {"kind": "frechet", "f": ["x1^3"], "order": 3}), config)
        assert code == EXIT_FAIL

        code, report = run(WorkbenchCommand("closure", {}, {"f": ["exp(x1^2)"]}), config)
        assert code == EXIT_INVALID
        assert report["details"]["error"] == "ParseError"

    def test_unknown_subcommand(self):
        with pytest.raises(ValueError):
            run(WorkbenchCommand("integrate"), Config())
