"""Unit tests for detbound.output and detbound.report."""

import json

import pytest
from click import unstyle

from detbound.output import render_json, render_mapping, render_table
from detbound.report import Report


class TestRender:
    """Test text and JSON rendering."""

    def test_table(self) -> None:
        """Columns are padded to the widest cell; None prints as a dash."""
        text = render_table(["a", "bb"], [["xyz", None], [1, "q"]])
        assert text.splitlines() == ["a    bb", "---  --", "xyz  -", "1    q"]

    def test_mapping(self) -> None:
        """Nested dicts indent, booleans read yes or no."""
        text = render_mapping(
            {"claim": "x", "ok": True, "details": {"n": 3, "seed": None}, "v": [1, 2]}
        )
        assert text.splitlines() == [
            "claim: x",
            "ok: yes",
            "details:",
            "  n: 3",
            "  seed: -",
            "v: 1, 2",
        ]

    def test_mapping_list_of_dicts(self) -> None:
        """Lists of records are separated."""
        text = render_mapping({"failures": [{"a": 1}, {"a": 2}]})
        assert text.splitlines() == ["failures:", "  a: 1", "  ---", "  a: 2", "  ---"]

    def test_json_stable(self) -> None:
        """Loading and dumping again gives the same text."""
        text = render_json({"b": [1, "1/2"], "a": {"x": None}})
        assert render_json(json.loads(text)) == text


class TestReport:
    """Test run summaries and exit codes."""

    def test_empty(self) -> None:
        """Nothing ran."""
        report = Report()
        assert report.return_code == 0
        assert str(report) == "nothing to report."

    def test_done(self) -> None:
        """Emitted reports keep the exit code at zero."""
        report = Report(quiet=True)
        report.done("bounds")
        report.done("search")
        assert report.return_code == 0
        assert unstyle(str(report)) == "2 reports emitted."

    def test_violation(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Violations exit with 2 and are echoed unless quiet."""
        report = Report()
        report.violated("sharpness", "delta + (n-1)*eps <= 1")
        assert report.return_code == 2
        assert report.violations == ["sharpness: delta + (n-1)*eps <= 1"]
        assert "sharpness" in capsys.readouterr().err

    def test_quiet_violation(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Quiet mode suppresses violation messages."""
        Report(quiet=True).violated("bounds", "x")
        assert capsys.readouterr().err == ""

    def test_failure_wins(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Failures take precedence over violations."""
        report = Report(quiet=True)
        report.violated("a", "b")
        report.failed("c", "d")
        assert report.return_code == 1
        assert "error: c failed: d" in capsys.readouterr().err
        assert unstyle(str(report)) == "1 hypothesis violation, 1 failure."

    def test_progress(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Progress is printed only when verbose."""
        Report().progress(1, 2)
        assert capsys.readouterr().err == ""
        Report(verbose=True).progress(1, 2)
        assert "1/2" in capsys.readouterr().err
