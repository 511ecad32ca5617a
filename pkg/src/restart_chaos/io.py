"""Table serialization: CSV and dependency-free SVG scatter plots.

Files are written once through a temporary sibling and renamed into place.
Output depends only on the table contents, so identical runs give
byte-identical files.
"""
from __future__ import annotations

import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Any, Sequence

__all__ = ["Table", "format_value", "emit_csv", "read_csv", "emit_svg_scatter", "atomic_write"]

SVG_WIDTH = 1200
SVG_HEIGHT = 800
_MARGIN_LEFT = 90
_MARGIN_RIGHT = 30
_MARGIN_TOP = 30
_MARGIN_BOTTOM = 60


@dataclass
class Table:
    """Named columns plus rows of values (floats, ints, strings or None)."""

    columns: list[str]
    rows: list[tuple[Any, ...]] = field(default_factory=list)

    def __post_init__(self):
        if len(set(self.columns)) != len(self.columns):
            raise ValueError(f"column names must be unique: {self.columns}")

    def column(self, name: str) -> list[Any]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        # 17 significant digits round-trip every binary64 value
        return format(value, ".17g")
    if isinstance(value, (set, frozenset)):
        return ";".join(sorted(value))
    return str(value)


def atomic_write(path: str | os.PathLike, data: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    umask = os.umask(0)
    os.umask(umask)
    try:
        os.chmod(tmp, 0o666 & ~umask)
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_csv(table: Table) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def emit_csv(table: Table, path: str | os.PathLike | None) -> None:
    """Write ``table`` as CSV; ``None`` or ``"-"`` writes to standard output."""
    text = render_csv(table)
    if path is None or os.fspath(path) == "-":
        sys.stdout.write(text)
        return
    atomic_write(path, text)


def read_csv(path: str | os.PathLike) -> Table:
    """Parse a CSV produced by ``emit_csv``; numeric fields come back as float."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    columns = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        if not line:
            continue
        parsed = []
        for cell in line.split(","):
            try:
                parsed.append(float(cell))
            except ValueError:
                parsed.append(cell)
        rows.append(tuple(parsed))
    return Table(columns, rows)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _label(x: float) -> str:
    return format(x, ".6g")


def render_svg_scatter(table: Table, x_column: str, y_column: str) -> str:
    if x_column not in table.columns or y_column not in table.columns:
        raise KeyError(f"columns {x_column!r}/{y_column!r} not in {table.columns}")
    xi = table.columns.index(x_column)
    yi = table.columns.index(y_column)
    points = []
    for row in table.rows:
        x, y = row[xi], row[yi]
        if isinstance(x, (int, float)) and isinstance(y, (int, float)) and math.isfinite(x) and math.isfinite(y):
            points.append((float(x), float(y)))

    left, right = _MARGIN_LEFT, SVG_WIDTH - _MARGIN_RIGHT
    top, bottom = _MARGIN_TOP, SVG_HEIGHT - _MARGIN_BOTTOM
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<g stroke="black" stroke-width="1">'
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/>'
        f'<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}"/></g>',
    ]
    text = '<text x="{x}" y="{y}" font-family="sans-serif" font-size="14" text-anchor="{anchor}">{s}</text>'
    out.append(text.format(x=(left + right) // 2, y=SVG_HEIGHT - 15, anchor="middle", s=x_column))
    out.append(text.format(x=20, y=(top + bottom) // 2, anchor="middle", s=y_column))

    if points:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        x_lo, x_hi = min(xs), max(xs)
        y_lo, y_hi = min(ys), max(ys)
        x_span = x_hi - x_lo or 1.0
        y_span = y_hi - y_lo or 1.0
        out.append(text.format(x=left, y=bottom + 20, anchor="start", s=_label(x_lo)))
        out.append(text.format(x=right, y=bottom + 20, anchor="end", s=_label(x_hi)))
        out.append(text.format(x=left - 8, y=bottom, anchor="end", s=_label(y_lo)))
        out.append(text.format(x=left - 8, y=top + 10, anchor="end", s=_label(y_hi)))
        out.append('<g fill="black">')
        for x, y in points:
            px = left + (x - x_lo) / x_span * (right - left)
            py = bottom - (y - y_lo) / y_span * (bottom - top)
            out.append(f'<rect x="{_fmt(px - 0.5)}" y="{_fmt(py - 0.5)}" width="1" height="1"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg_scatter(table: Table, x_column: str, y_column: str, path: str | os.PathLike) -> None:
    """Standalone 1200x800 scatter of ``y_column`` against ``x_column``, one 1px marker per row."""
    atomic_write(path, render_svg_scatter(table, x_column, y_column))


def table_from_records(columns: Sequence[str], records: Sequence[Any]) -> Table:
    return Table(list(columns), [tuple(getattr(r, c) for c in columns) for r in records])
