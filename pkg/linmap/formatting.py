"""
Output formatting for linmap
Renders results as JSON, CSV or rich text tables.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import click
from rich import box
from rich.console import Console
from rich.table import Table

from .constants import FORMAT_THOUSANDS_THRESHOLD


def format_number(num: int) -> str:
    """
    Format number with underscore as thousand separator

    Args:
        num: Integer to format; negatives keep their sign

    Returns:
        Decimal string with underscores every three digits

    Examples:
        1234567 -> "1_234_567"
        1000 -> "1_000"
        999 -> "999"
    """
    if abs(num) < FORMAT_THOUSANDS_THRESHOLD:
        return str(num)
    return f"{num:,}".replace(',', '_')


def format_cell(value: Any, grouped: bool = False) -> str:
    """Cell text: None -> 'none', ints as decimal, floats with 6 decimals."""
    if value is None:
        return 'none'
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return format_number(value) if grouped else str(value)
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, (list, tuple)):
        return ' '.join(format_cell(v) for v in value)
    return str(value)


def _jsonable(value: Any) -> Any:
    """Big integers become decimal strings; None stays null."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


@dataclass
class Report:
    """A titled table plus the JSON payload that stands for it."""
    title: str
    columns: Sequence[str]
    rows: list[Sequence[Any]] = field(default_factory=list)
    payload: Any = None

    def json_payload(self) -> Any:
        if self.payload is not None:
            return self.payload
        return [
            {col: _jsonable(value) for col, value in zip(self.columns, row)}
            for row in self.rows
        ]


def render_json(report: Report) -> str:
    return json.dumps(report.json_payload(), separators=(',', ':')) + '\n'


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\r\n')
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def render_text(report: Report, console: Console) -> None:
    table = Table(title=report.title, box=box.ROUNDED)
    for col in report.columns:
        table.add_column(col, style="cyan" if col == report.columns[0] else None)
    for row in report.rows:
        table.add_row(*(format_cell(v, grouped=True) for v in row))
    console.print(table)


def emit(report: Report, output_format: str, console: Console | None = None) -> None:
    """Write the report to stdout (json and csv go out byte for byte)."""
    if output_format == 'json':
        click.echo(render_json(report), nl=False)
    elif output_format == 'csv':
        click.echo(render_csv(report), nl=False)
    else:
        render_text(report, console or Console())
