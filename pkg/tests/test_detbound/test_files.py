"""Unit tests for detbound.files."""

from fractions import Fraction
from pathlib import Path

import pytest

from detbound.exact import FormatError
from detbound.files import parse_config_toml, read_matrix, write_output


class TestParseConfig:
    """Test reading the [tool.detbound] table."""

    def test_keys_normalised(self, tmp_path: Path) -> None:
        """Dashes become underscores, nested tables stay tables."""
        path = tmp_path / "detbound.toml"
        path.write_text(
            "[tool.detbound]\n"
            "minor-limit = 6\n"
            "emit = 'json'\n"
            "[tool.detbound.verify]\n"
            "zero-diag = true\n"
            "trials = 50\n",
            encoding="utf8",
        )
        assert parse_config_toml(str(path)) == {
            "minor_limit": 6,
            "emit": "json",
            "verify": {"zero_diag": True, "trials": 50},
        }

    def test_missing_table(self, tmp_path: Path) -> None:
        """Files without a detbound table configure nothing."""
        path = tmp_path / "pyproject.toml"
        path.write_text("[tool.other]\nx = 1\n", encoding="utf8")
        assert parse_config_toml(str(path)) == {}

    def test_invalid_toml(self, tmp_path: Path) -> None:
        """Syntax errors surface as ValueError subclasses."""
        path = tmp_path / "broken.toml"
        path.write_text("[tool.detbound\n", encoding="utf8")
        with pytest.raises(ValueError):  # noqa: PT011
            parse_config_toml(str(path))


class TestReadMatrix:
    """Test loading matrices from disk."""

    def test_read(self, tmp_path: Path) -> None:
        """Order line, then rows of rationals."""
        path = tmp_path / "f.txt"
        path.write_text("2\n1/3 0\n\n0 1/3\n", encoding="utf8")
        matrix = read_matrix(str(path))
        assert matrix.order == 2
        assert matrix[0, 0] == Fraction(1, 3)

    def test_not_utf8(self, tmp_path: Path) -> None:
        """Binary files are format errors."""
        path = tmp_path / "f.bin"
        path.write_bytes(b"2\n\xff\xfe 0\n0 1\n")
        with pytest.raises(FormatError, match="UTF-8"):
            read_matrix(str(path))

    def test_bad_shape(self, tmp_path: Path) -> None:
        """A short row is rejected."""
        path = tmp_path / "f.txt"
        path.write_text("2\n1 0\n0\n", encoding="utf8")
        with pytest.raises(FormatError):
            read_matrix(str(path))


def test_write_output_adds_newline(tmp_path: Path) -> None:
    """Reports always end with exactly one newline."""
    path = tmp_path / "out.txt"
    write_output(str(path), "report")
    assert path.read_text(encoding="utf8") == "report\n"
    write_output(str(path), "again\n")
    assert path.read_text(encoding="utf8") == "again\n"
