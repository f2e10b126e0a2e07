"""Deterministic CSV/JSON emission shared by the CLI experiments."""
from __future__ import annotations

import datetime
import json
from pathlib import Path

CSV_PRECISION = 12


def fmt(value) -> str:
    """Fixed 12-significant-digit rendering for reproducible output bodies."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if value is None:
        return "nan"
    if isinstance(value, float):
        return f"{value:.{CSV_PRECISION}g}"
    return str(value)


def write_csv(path, columns, rows, meta: dict | None = None) -> None:
    """CSV with '#'-prefixed metadata lines, a header row and 12-digit bodies.

    The timestamp line is part of the metadata block and excluded from
    byte-level determinism guarantees.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# generated: {datetime.datetime.now(datetime.timezone.utc).isoformat()}"]
    for key in sorted(meta or {}):
        lines.append(f"# {key}: {fmt((meta or {})[key])}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_json(path, payload: dict) -> None:
    """UTF-8 JSON with stable key order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_csv_body(path):
    """(columns, rows-of-strings) of a CSV written by write_csv."""
    lines = [ln for ln in Path(path).read_text().splitlines()
             if ln and not ln.startswith("#")]
    columns = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return columns, rows
