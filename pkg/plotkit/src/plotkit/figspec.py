"""Figure specifications: ids, input schemas and style options."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .csvio import SchemaError, Table, read_table, require_columns

SERIES_COLUMNS = ("n", "O22")
FIDELITY_COLUMNS = ("n", "fidelity")
SPECTRUM_COLUMNS = ("quasienergy", "overlap2", "entropy_half")
GAP_COLUMNS = ("omega", "w_R_measured", "w_R_predicted")
NORMS_COLUMNS = ("omega", "lambda", "f1_exact", "f2_exact", "f1_analytic")
SWEEP_COLUMNS = ("omega", "lambda", "classification")
RSTAT_COLUMNS = ("bin_left", "bin_right", "density")

# figure id -> (column schema per CSV input, min inputs, max inputs)
FIGURES = {
    "fig1": ((SERIES_COLUMNS, SERIES_COLUMNS, SPECTRUM_COLUMNS, SPECTRUM_COLUMNS), 4, 4),
    "fig2": ((GAP_COLUMNS,), 1, 1),
    "fig3": ((SERIES_COLUMNS,) * 4, 1, 4),
    "fig4": ((SPECTRUM_COLUMNS,) * 4, 1, 4),
    "fig5a": ((NORMS_COLUMNS,) * 3, 1, 3),
    "fig5b": ((SWEEP_COLUMNS,), 1, 1),
    "sm-fidelity": ((FIDELITY_COLUMNS,) * 4, 1, 4),
    "sm-rstat": ((RSTAT_COLUMNS,), 1, 1),
}
FIGURE_IDS = tuple(FIGURES)


@dataclass
class Style:
    """Rendering knobs that do not alter any numeric value."""
    scar_threshold: float = 1e-2   # overlap^2 above which a point is highlighted
    inf_t: float | None = None     # dashed infinite-temperature reference line
    manifest: str | None = None    # sweep manifest JSON with frequency overlays


@dataclass
class FigureSpec:
    figure: str
    inputs: list[str] = field(default_factory=list)
    out: str = "figure.png"
    style: Style = field(default_factory=Style)

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise SchemaError(f"unknown figure id '{self.figure}' "
                              f"(expected one of: {', '.join(FIGURE_IDS)})")
        schemas, lo, hi = FIGURES[self.figure]
        if not lo <= len(self.inputs) <= hi:
            span = str(lo) if lo == hi else f"{lo}-{hi}"
            raise SchemaError(f"{self.figure} takes {span} input file(s), "
                              f"got {len(self.inputs)}")

    def load(self) -> list[Table]:
        """Read and schema-check every input, in order."""
        schemas, _, _ = FIGURES[self.figure]
        tables = []
        for path, required in zip(self.inputs, schemas):
            table = read_table(Path(path))
            require_columns(table, required)
            tables.append(table)
        return tables
