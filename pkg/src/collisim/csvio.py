"""Deterministic CSV output.

Floats are written with 17 significant digits so that parsing them back gives the same double.
"""

import csv
import io
import sys
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

from pydantic import BaseModel
from rich.console import Console

from collisim.models import Subcommand

console = Console(stderr=True)

SCHEMAS: dict[Subcommand, tuple[str, ...]] = {
    "single-step": ("step", "r_x", "r_y", "r_z", "entropy", "oracle_deviation"),
    "two-step": (
        "Q",
        "q",
        "a",
        "eps1",
        "eps2",
        "theta",
        "phi",
        "r1_x",
        "r1_y",
        "r1_z",
        "r2_x",
        "r2_y",
        "r2_z",
        "correction_norm",
        "oracle_deviation",
        "min_eigenvalue",
        "is_cp",
    ),
    "markov-scan": ("Q", "a", "eps1", "eps2", "min_eigenvalue", "is_cp", "negative_weights", "error"),
    "delta-e": ("theta", "phi", "Q", "E", "E0", "deltaE", "error"),
    "ghz": ("n", "r_x", "r_y", "r_z", "entropy", "exact_deviation"),
    "validate": ("check", "status", "max_deviation", "tolerance", "detail"),
}

Row = Mapping[str, object] | BaseModel


def format_cell(value: object) -> str:
    """Render one field: 17-digit floats, lower-case booleans, empty for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _as_mapping(row: Row) -> Mapping[str, object]:
    if isinstance(row, BaseModel):
        return row.model_dump()
    return row


def csv_writer(rows: Iterable[Row], schema: Sequence[str]) -> bytes:
    """Header line plus one line per row, in the given order."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(schema)
    for row in rows:
        values = _as_mapping(row)
        missing = [column for column in schema if column not in values]
        if missing:
            raise KeyError(f"Row is missing columns {missing}")
        writer.writerow([format_cell(values[column]) for column in schema])
    return buffer.getvalue().encode("utf-8")


def write_csv(rows: Iterable[Row], schema: Sequence[str], path: Path | None = None) -> None:
    """Write to ``path`` (parents created) or to standard output."""
    data = csv_writer(rows, schema)
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    console.print(f"[green]Wrote {path}[/green]")
