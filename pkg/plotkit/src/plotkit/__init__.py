"""Deterministic figure rendering for the driven constrained-chain simulator."""
from .csvio import SchemaError, Table, fmt, read_table, require_columns
from .extract import extract_points
from .figspec import FIGURE_IDS, FigureSpec, Style
from .render import build_figure, pixel_hash, render

__version__ = "0.1.0"

__all__ = [
    "FIGURE_IDS", "FigureSpec", "SchemaError", "Style", "Table",
    "build_figure", "extract_points", "fmt", "pixel_hash", "read_table",
    "render", "require_columns", "__version__",
]
