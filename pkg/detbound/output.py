"""Nice output for detbound.

Messages go to stderr through ``out``/``err``; reports are rendered to text
here and written to stdout or a file by the app.
"""

import json
from collections.abc import Sequence
from typing import Any

from click import echo, style

JSON_INDENT = 2


def _message(message: str, defaults: dict[str, Any], styles: dict[str, Any]) -> None:
    echo(style(message, **{**defaults, **styles}), err=True)


def out(message: str, **styles: Any) -> None:  # noqa: ANN401
    """Write a status line to stderr, bold unless told otherwise.

    Parameters
    ----------
    message : str
        Text of the line.
    **styles : Any
        Overrides for ``click.style``.
    """
    _message(message, {"bold": True}, styles)


def err(message: str, **styles: Any) -> None:  # noqa: ANN401
    """Write a problem to stderr, red unless another colour is given.

    Parameters
    ----------
    message : str
        Text of the line.
    **styles : Any
        Overrides for ``click.style``.
    """
    _message(message, {"fg": "red"}, styles)


def render_json(data: object) -> str:
    """Serialise a report.

    The layout is fixed, so loading the text and dumping it again yields
    the same bytes.
    """
    return json.dumps(data, indent=JSON_INDENT, ensure_ascii=False)


def render_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    """Left aligned plain text table.

    Parameters
    ----------
    headers : Sequence[str]
        Column titles.
    rows : Sequence[Sequence[object]]
        Cells, converted with ``str``; None renders as ``-``.

    Returns
    -------
    str
        The table without a trailing newline.
    """
    cells = [[("-" if c is None else str(c)) for c in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend(
        "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells
    )
    return "\n".join(lines)


def render_mapping(data: dict[str, Any], indent: int = 0) -> str:
    """Nested ``key: value`` listing of a JSON-like mapping."""
    pad = " " * indent
    lines: list[str] = []
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_mapping(value, indent + 2))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(render_mapping(item, indent + 2))
                lines.append(f"{pad}  ---")
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")
    return "\n".join(line for line in lines if line)


def _scalar(value: object) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return ", ".join(_scalar(v) for v in value)
    return str(value)
