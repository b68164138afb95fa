"""Configuration and matrix file handling for detbound."""

import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .exact import DenseMatrix, FormatError, parse_matrix

if sys.version_info >= (3, 11):
    try:
        import tomllib
    except ImportError:
        # Help users on older alphas
        if not TYPE_CHECKING:
            import tomli as tomllib
        else:
            raise
else:
    import tomli as tomllib


def parse_config_toml(path_config: str) -> dict[str, Any]:
    """Read the ``[tool.detbound]`` table of a TOML file.

    Keys are normalised to Python identifiers (``minor-limit`` becomes
    ``minor_limit``). Nested tables are kept as they are, so a
    ``[tool.detbound.search]`` table becomes the defaults of the ``search``
    subcommand. If parsing fails, will raise a tomllib.TOMLDecodeError.

    Parameters
    ----------
    path_config : str
        Path to the configuration file.

    Returns
    -------
    dict[str, Any]
        Configuration dictionary, empty when the file has no detbound table.
    """
    with Path(path_config).open("rb") as f:
        document: dict[str, Any] = tomllib.load(f)
    config: dict[str, Any] = document.get("tool", {}).get("detbound", {})
    return _normalise(config)


def _normalise(config: dict[str, Any]) -> dict[str, Any]:
    normalised: dict[str, Any] = {}
    for key, value in config.items():
        name = key.replace("--", "").replace("-", "_")
        normalised[name] = _normalise(value) if isinstance(value, dict) else value
    return normalised


def read_matrix(path: str) -> DenseMatrix:
    """Load a matrix in the text format.

    Parameters
    ----------
    path : str
        File holding the order line followed by the rows.

    Returns
    -------
    DenseMatrix
        The parsed matrix.

    Raises
    ------
    FormatError
        If the file is not valid UTF-8 or not a valid matrix.
    """
    try:
        text = Path(path).read_text(encoding="utf8")
    except UnicodeDecodeError as e:
        msg = f"{path} is not UTF-8 text: {e}"
        raise FormatError(msg) from None
    return parse_matrix(text)


def write_output(path: str, text: str) -> None:
    """Write a report to ``path``, ending it with a newline."""
    if not text.endswith("\n"):
        text += "\n"
    Path(path).write_text(text, encoding="utf8")
