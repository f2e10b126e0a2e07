"""Deterministic rendering and golden pixel hashes."""
import json
import os
from pathlib import Path

import pytest

from plotkit import FigureSpec, Style, build_figure, pixel_hash, render

GOLDENS = Path(__file__).parent / "goldens.json"


def all_specs(data_dir, out_dir):
    d = data_dir
    return {
        "fig1": FigureSpec("fig1", [str(d / "dyn_hi" / "series.csv"),
                                    str(d / "dyn_lo" / "series.csv"),
                                    str(d / "spec_hi" / "spectrum.csv"),
                                    str(d / "spec_lo" / "spectrum.csv")],
                           str(out_dir / "fig1.png")),
        "fig2": FigureSpec("fig2", [str(d / "gap.csv")], str(out_dir / "fig2.png")),
        "fig3": FigureSpec("fig3", [str(d / "dyn_hi" / "series.csv"),
                                    str(d / "dyn_lo" / "series.csv")],
                           str(out_dir / "fig3.png"), Style(inf_t=0.236)),
        "fig4": FigureSpec("fig4", [str(d / "spec_hi" / "spectrum.csv"),
                                    str(d / "spec_lo" / "spectrum.csv")],
                           str(out_dir / "fig4.png")),
        "fig5a": FigureSpec("fig5a", [str(d / "norms15" / "norms.csv"),
                                      str(d / "norms20" / "norms.csv")],
                            str(out_dir / "fig5a.png")),
        "fig5b": FigureSpec("fig5b", [str(d / "sweep" / "sweep.csv")],
                            str(out_dir / "fig5b.png"),
                            Style(manifest=str(d / "sweep" / "sweep_manifest.json"))),
        "sm-fidelity": FigureSpec("sm-fidelity",
                                  [str(d / "dyn_hi" / "series.csv"),
                                   str(d / "dyn_lo" / "series.csv")],
                                  str(out_dir / "sm-fidelity.png")),
        "sm-rstat": FigureSpec("sm-rstat", [str(d / "rstat" / "levelstats.csv")],
                               str(out_dir / "sm-rstat.png")),
    }


def test_every_figure_renders(data_dir, tmp_path):
    for figure_id, spec in all_specs(data_dir, tmp_path).items():
        out = render(spec)
        assert out.exists() and out.stat().st_size > 1000, figure_id
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_pixel_hashes_stable_across_two_runs(data_dir, tmp_path):
    for figure_id in ("fig2", "fig5b"):
        spec = all_specs(data_dir, tmp_path)[figure_id]
        hashes = []
        for _ in range(2):
            fig = build_figure(spec)
            hashes.append(pixel_hash(fig))
        assert hashes[0] == hashes[1], figure_id


def test_pixel_hashes_match_goldens(data_dir, tmp_path):
    specs = all_specs(data_dir, tmp_path)
    current = {fid: pixel_hash(build_figure(spec)) for fid, spec in specs.items()}
    if os.environ.get("PLOTKIT_UPDATE_GOLDENS") or not GOLDENS.exists():
        GOLDENS.write_text(json.dumps(current, indent=2, sort_keys=True) + "\n")
    golden = json.loads(GOLDENS.read_text())
    assert current == golden


def test_render_closes_figure_and_is_idempotent(data_dir, tmp_path):
    import matplotlib.pyplot as plt
    spec = all_specs(data_dir, tmp_path)["fig2"]
    before = plt.get_fignums()
    a = render(spec).read_bytes()
    assert plt.get_fignums() == before
    b = render(spec).read_bytes()
    assert a == b  # same bytes on re-render, fixed metadata
