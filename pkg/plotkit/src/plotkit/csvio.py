"""Reading the simulation CSV format: '#' metadata lines, header, numeric body."""
from __future__ import annotations

from pathlib import Path

import numpy as np

PRINT_PRECISION = 12


class SchemaError(Exception):
    """Input file does not match the expected column schema."""


def fmt(value) -> str:
    """12-significant-digit rendering, matching the simulation's print precision."""
    if isinstance(value, float):
        return f"{value:.{PRINT_PRECISION}g}"
    return str(value)


class Table:
    """A parsed CSV: metadata dict, column names, and per-column arrays."""

    def __init__(self, path, meta, columns, body):
        self.path = Path(path)
        self.meta = meta
        self.columns = columns
        self._body = body  # list of rows of raw strings

    def raw(self, column: str) -> list[str]:
        idx = self.columns.index(column)
        return [row[idx] for row in self._body]

    def numeric(self, column: str) -> np.ndarray:
        try:
            return np.array([float(v) for v in self.raw(column)])
        except ValueError as exc:
            raise SchemaError(
                f"{self.path}: column '{column}' is not numeric ({exc})") from None

    def strings(self, column: str) -> list[str]:
        return self.raw(column)

    def __len__(self):
        return len(self._body)


def read_table(path) -> Table:
    """Parse a CSV written by the simulation CLI."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file not found: {path}")
    meta = {}
    header = None
    body = []
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            stripped = line[1:].strip()
            if ":" in stripped:
                key, _, value = stripped.partition(":")
                meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = line.split(",")
        else:
            body.append(line.split(","))
    if header is None or not body:
        raise SchemaError(f"empty series file: {path}")
    width = len(header)
    for row in body:
        if len(row) != width:
            raise SchemaError(f"{path}: ragged row (expected {width} fields)")
    return Table(path, meta, header, body)


def require_columns(table: Table, required: tuple[str, ...]) -> None:
    """Raise SchemaError naming the first missing column."""
    for column in required:
        if column not in table.columns:
            raise SchemaError(
                f"{table.path}: missing required column '{column}' "
                f"(found: {', '.join(table.columns)})")
