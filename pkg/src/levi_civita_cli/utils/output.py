import json
from datetime import datetime
from pathlib import Path
from typing import Any

from .. import __version__


class OutputFormatter:
    """Handles different output formats for workbench reports."""

    @staticmethod
    def format_json(report: dict[str, Any], pretty: bool = True, verbose: bool = False) -> str:
        """Format a report as JSON."""
        if verbose:
            report = {
                **report,
                "generated_on": datetime.now().isoformat(timespec="seconds"),
                "version": __version__,
            }

        if pretty:
            return json.dumps(report, indent=2, ensure_ascii=False)
        return json.dumps(report, ensure_ascii=False)

    @staticmethod
    def format_markdown(report: dict[str, Any], verbose: bool = False) -> str:
        """Format a report as Markdown."""
        md_content = [f"# Levi-Civita Workbench: {report['command']}\n"]
        if verbose:
            md_content.append(f"**Generated on:** {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
            md_content.append(f"**Version:** {__version__}\n")

        md_content.append(f"**Result:** {'PASS' if report['passed'] else 'FAIL'}\n")
        if report.get("summary"):
            md_content.append(f"{report['summary']}\n")

        table = report.get("table")
        if table and table.get("rows"):
            headers = table["headers"]
            md_content.append("| " + " | ".join(headers) + " |")
            md_content.append("|" + "|".join("---" for _ in headers) + "|")
            for row in table["rows"]:
                md_content.append("| " + " | ".join(str(cell) for cell in row) + " |")
            md_content.append("")

        if verbose or not table:
            md_content.append("**Details:**\n")
            md_content.append("```json")
            md_content.append(json.dumps(report.get("details", {}), indent=2, ensure_ascii=False))
            md_content.append("```\n")

        return "\n".join(md_content)

    @staticmethod
    def format_text(report: dict[str, Any], verbose: bool = False) -> str:
        """Format a report as plain text."""
        text_content = [f"Levi-Civita Workbench: {report['command']}"]
        text_content.append("=" * 50)

        if verbose:
            text_content.append(f"Generated on: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
            text_content.append(f"Version: {__version__}")
            text_content.append("")

        text_content.append(f"Result: {'PASS' if report['passed'] else 'FAIL'}")
        if report.get("summary"):
            text_content.append(report["summary"])
        text_content.append("")

        table = report.get("table")
        if table and table.get("rows"):
            text_content.append(OutputFormatter.format_table(table["headers"], table["rows"]))
            text_content.append("")

        if verbose or not table:
            for key, value in report.get("details", {}).items():
                if isinstance(value, (dict, list)):
                    text_content.append(f"{key}:")
                    text_content.append(json.dumps(value, indent=2, ensure_ascii=False))
                else:
                    text_content.append(f"{key}: {value}")
            text_content.append("-" * 50)

        return "\n".join(text_content)

    @staticmethod
    def format_table(headers: list[str], rows: list[list[Any]]) -> str:
        """Render rows as a left-aligned plain-text table."""
        cells = [[str(c) for c in row] for row in rows]
        widths = [len(h) for h in headers]
        for row in cells:
            for i, cell in enumerate(row):
                widths[i] = max(widths[i], len(cell))
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths, strict=True))]
        lines.append("  ".join("-" * w for w in widths))
        for row in cells:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths, strict=True)))
        return "\n".join(lines)

    def format_report(self, report: dict[str, Any], format_type: str, verbose: bool = False) -> str:
        """Format a report in the specified format."""
        if format_type == "json":
            return self.format_json(report, verbose=verbose)
        elif format_type == "markdown":
            return self.format_markdown(report, verbose=verbose)
        elif format_type == "text":
            return self.format_text(report, verbose=verbose)
        else:
            raise ValueError(f"Unsupported format type: {format_type}")

    @staticmethod
    def save_to_file(content: str, file_path: str) -> None:
        """Save content to file."""
        output_path = Path(file_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        with open(output_path, "w", encoding="utf-8") as f:
            f.write(content)

    @staticmethod
    def get_output_extension(format_type: str) -> str:
        """Get appropriate file extension for format."""
        extensions = {
            "json": ".json",
            "markdown": ".md",
            "text": ".txt"
        }
        return extensions.get(format_type, ".txt")


class ResultProcessor:
    """Aggregates per-instance results of a property suite."""

    @staticmethod
    def aggregate_results(results: list[dict[str, Any]]) -> dict[str, Any]:
        """Aggregate results and provide summary statistics."""
        if not results:
            return {
                "total": 0,
                "passed": 0,
                "failed": 0,
                "pass_rate": 0.0,
                "errors": []
            }

        passed = [r for r in results if r.get("passed", False)]
        failed = [r for r in results if not r.get("passed", False)]
        errors = [r.get("error") for r in failed if r.get("error")]

        return {
            "total": len(results),
            "passed": len(passed),
            "failed": len(failed),
            "pass_rate": len(passed) / len(results) * 100,
            "errors": errors
        }
