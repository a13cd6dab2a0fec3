import json

import pytest

from levi_civita_cli import __version__
from levi_civita_cli.utils.output import OutputFormatter, ResultProcessor

REPORT = {
    "command": "closure",
    "passed": True,
    "summary": "Translation-invariant closure has dimension 2",
    "details": {"dimension": 2, "basis": ["x1", "1"]},
    "table": {"headers": ["k", "basis"], "rows": [[1, "x1"], [2, "1"]]},
}


class TestOutputFormatter:
    """Rendering of workbench reports."""

    def setup_method(self):
        self.formatter = OutputFormatter()

    def test_json_round_trips(self):
        assert json.loads(self.formatter.format_report(REPORT, "json")) == REPORT

    def test_verbose_json_adds_metadata(self):
        data = json.loads(self.formatter.format_report(REPORT, "json", verbose=True))
        assert data["version"] == __version__
        assert "generated_on" in data

    def test_text_contains_table(self):
        text = self.formatter.format_report(REPORT, "text")
        assert "Result: PASS" in text
        assert "basis" in text
        assert "dimension:" not in text

    def test_verbose_text_adds_details(self):
        assert "dimension: 2" in self.formatter.format_report(REPORT, "text", verbose=True)

    def test_markdown_table(self):
        md = self.formatter.format_report({**REPORT, "passed": False}, "markdown")
        assert md.startswith("# Levi-Civita Workbench: closure")
        assert "**Result:** FAIL" in md
        assert "| k | basis |" in md

    def test_unsupported_format(self):
        with pytest.raises(ValueError):
            self.formatter.format_report(REPORT, "xml")

    def test_format_table_alignment(self):
        table = OutputFormatter.format_table(["a", "bb"], [["long", 1]])
        assert table.splitlines() == ["a     bb", "----  --", "long  1 "]

    def test_extensions(self):
        assert OutputFormatter.get_output_extension("markdown") == ".md"
        assert OutputFormatter.get_output_extension("other") == ".txt"


class TestResultProcessor:
    """Aggregation of per-instance results."""

    def test_empty(self):
        assert ResultProcessor.aggregate_results([])["total"] == 0

    def test_pass_rate(self):
        summary = ResultProcessor.aggregate_results([{"passed": True}, {"passed": False, "error": "x"}])
        assert summary["pass_rate"] == 50.0
        assert summary["errors"] == ["x"]
