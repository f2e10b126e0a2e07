"""Rendering: one deterministic image per figure spec.

All numeric values pass straight from the CSV to the artists; the only
transforms are axis scaling choices (e.g. omega/lambda on fig5a).
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .csvio import SchemaError, Table  # noqa: E402
from .figspec import FigureSpec  # noqa: E402

FIGSIZE = (8.0, 5.0)
DPI = 100

_RC = {
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "figure.dpi": DPI,
    "savefig.dpi": DPI,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
}

CLASS_COLORS = {
    "nonergodic": "tab:blue",
    "ergodic": "tab:red",
    "precursor": "0.6",
    "failed": "black",
}


def _panel_label(table: Table) -> str:
    omega = table.meta.get("omega")
    lam = table.meta.get("lambda")
    if omega is not None:
        return f"$\\omega_D$={omega}" + (f", $\\lambda$={lam}" if lam else "")
    return table.path.stem


def _plot_series(ax, table: Table, column: str, style):
    n = table.numeric("n")
    ax.plot(n, table.numeric(column), color="black", gid=f"series:{table.path.stem}")
    if style.inf_t is not None:
        ax.axhline(style.inf_t, color="tab:blue", linestyle="--", linewidth=0.9)
    ax.set_xlabel("n")
    ax.set_ylabel("$O_{22}$" if column == "O22" else "fidelity")
    ax.set_title(_panel_label(table))


def _plot_entropy_scatter(ax, table: Table, style):
    e = table.numeric("quasienergy")
    s = table.numeric("entropy_half")
    overlap = table.numeric("overlap2")
    scar = overlap > style.scar_threshold
    ax.scatter(e[~scar], s[~scar], s=6, color="0.4", gid="points:thermal")
    ax.scatter(e[scar], s[scar], s=22, facecolors="none", edgecolors="red",
               gid="points:scar")
    ax.set_xlabel("$E_F$")
    ax.set_ylabel("$S_{L/2}$")
    ax.set_title(_panel_label(table))


def _panel_grid(fig, count):
    rows = 1 if count <= 2 else 2
    cols = count if count <= 2 else (count + 1) // 2
    return [fig.add_subplot(rows, cols, i + 1) for i in range(count)]


def _render_fig1(fig, tables, style):
    axes = [fig.add_subplot(2, 2, i + 1) for i in range(4)]
    for ax, table in zip(axes[:2], tables[:2]):
        _plot_series(ax, table, "O22", style)
    for ax, table in zip(axes[2:], tables[2:]):
        _plot_entropy_scatter(ax, table, style)


def _render_fig2(fig, tables, style):
    (table,) = tables
    ax = fig.add_subplot(1, 1, 1)
    omega = table.numeric("omega")
    ax.plot(omega, table.numeric("w_R_predicted"), color="tab:blue",
            gid="points:predicted", label="predicted")
    ax.plot(omega, table.numeric("w_R_measured"), "o", color="tab:green",
            gid="points:measured", label="measured")
    ax.set_xlabel("$\\omega_D$")
    ax.set_ylabel("$w_R$")
    ax.legend()


def _render_fig3(fig, tables, style):
    for ax, table in zip(_panel_grid(fig, len(tables)), tables):
        _plot_series(ax, table, "O22", style)


def _render_fig4(fig, tables, style):
    for ax, table in zip(_panel_grid(fig, len(tables)), tables):
        _plot_entropy_scatter(ax, table, style)


def _render_fig5a(fig, tables, style):
    ax = fig.add_subplot(1, 2, 1)
    inset = fig.add_subplot(1, 2, 2)
    for table in tables:
        omega = table.numeric("omega")
        lam = table.numeric("lambda")
        x = omega / lam
        ax.plot(x, table.numeric("f1_exact"), marker=".", label=f"$\\lambda$={lam[0]:g}",
                gid=f"f1:{table.path.stem}")
    first = tables[0]
    x0 = first.numeric("omega") / first.numeric("lambda")
    ax.plot(x0, first.numeric("f1_analytic"), "k--", label="analytic")
    ax.set_xlabel("$\\omega_D/\\lambda$")
    ax.set_ylabel("$f_1$")
    ax.set_yscale("log")
    ax.legend()
    inset.plot(first.numeric("omega"), first.numeric("f1_exact"), color="black",
               label="$f_1$")
    inset.plot(first.numeric("omega"), first.numeric("f2_exact"), color="magenta",
               label="$f_2$")
    inset.set_xlabel("$\\omega_D$")
    inset.set_yscale("log")
    inset.legend()


def _render_fig5b(fig, tables, style):
    (table,) = tables
    ax = fig.add_subplot(1, 1, 1)
    omega = table.numeric("omega")
    lam = table.numeric("lambda")
    labels = table.strings("classification")
    for label, color in CLASS_COLORS.items():
        mask = np.array([v == label for v in labels])
        if not mask.any():
            continue
        marker = "x" if label == "failed" else "s"
        ax.scatter(omega[mask], lam[mask], s=60, marker=marker, color=color,
                   label=label, gid=f"class:{label}")
    if style.manifest:
        overlays = json.loads(Path(style.manifest).read_text())
        for lam_key, freqs in overlays.get("critical_frequencies", {}).items():
            ax.plot(freqs, [float(lam_key)] * len(freqs), "r--", marker=".",
                    linewidth=0.8)
    ax.set_xlabel("$\\omega_D$")
    ax.set_ylabel("$\\lambda$")
    ax.legend(loc="upper right")


def _render_sm_fidelity(fig, tables, style):
    for ax, table in zip(_panel_grid(fig, len(tables)), tables):
        _plot_series(ax, table, "fidelity", style)


def _folded_goe(r):
    return 2 * (27.0 / 4.0) * (r + r ** 2) / (1 + r + r ** 2) ** 2.5


def _folded_poisson(r):
    return 2.0 / (1 + r) ** 2


def _render_sm_rstat(fig, tables, style):
    (table,) = tables
    ax = fig.add_subplot(1, 1, 1)
    left = table.numeric("bin_left")
    right = table.numeric("bin_right")
    ax.bar(left, table.numeric("density"), width=right - left, align="edge",
           color="tab:red", alpha=0.6, label="numerics")
    r = np.linspace(0, 1, 400)
    ax.plot(r, _folded_goe(r), color="black", label="GOE")
    ax.plot(r, _folded_poisson(r), color="0.5", linestyle="--", label="Poisson")
    ax.set_xlabel("$\\tilde r$")
    ax.set_ylabel("$P(\\tilde r)$")
    title = table.meta.get("mean_r")
    if title:
        ax.set_title(f"$\\langle \\tilde r \\rangle$ = {title}")
    ax.legend()


_RENDERERS = {
    "fig1": _render_fig1,
    "fig2": _render_fig2,
    "fig3": _render_fig3,
    "fig4": _render_fig4,
    "fig5a": _render_fig5a,
    "fig5b": _render_fig5b,
    "sm-fidelity": _render_sm_fidelity,
    "sm-rstat": _render_sm_rstat,
}


def build_figure(spec: FigureSpec):
    """Construct the matplotlib Figure for a spec without saving it."""
    tables = spec.load()
    with plt.rc_context(_RC):
        fig = plt.figure(figsize=FIGSIZE)
        _RENDERERS[spec.figure](fig, tables, spec.style)
        fig.tight_layout()
    return fig


def pixel_hash(fig) -> str:
    """SHA-256 of the rendered RGBA pixel buffer (metadata-free by design)."""
    fig.canvas.draw()
    buf = np.asarray(fig.canvas.buffer_rgba())
    digest = hashlib.sha256()
    digest.update(str(buf.shape).encode())
    digest.update(buf.tobytes())
    return digest.hexdigest()


def render(spec: FigureSpec) -> Path:
    """Render a spec to its output path and return that path."""
    fig = build_figure(spec)
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(out, metadata={"Software": "plotkit"})
    finally:
        plt.close(fig)
    return out
