"""Plotted points equal the source CSV to print precision."""
import numpy as np

from plotkit import FigureSpec, Style, build_figure, extract_points, fmt, read_table


def test_fig2_roundtrip_to_print_precision(gap_csv, tmp_path):
    spec = FigureSpec("fig2", [str(gap_csv)], str(tmp_path / "fig2.png"))
    points = extract_points(build_figure(spec))
    table = read_table(gap_csv)
    measured = points["points:measured"]
    predicted = points["points:predicted"]
    assert [fmt(v) for v in measured[:, 0]] == table.raw("omega")
    assert [fmt(v) for v in measured[:, 1]] == table.raw("w_R_measured")
    assert [fmt(v) for v in predicted[:, 1]] == table.raw("w_R_predicted")


def test_fig5b_roundtrip_to_print_precision(data_dir, tmp_path):
    path = data_dir / "sweep" / "sweep.csv"
    spec = FigureSpec("fig5b", [str(path)], str(tmp_path / "fig5b.png"))
    points = extract_points(build_figure(spec))
    table = read_table(path)
    source = {(o, la, c) for o, la, c in zip(table.raw("omega"), table.raw("lambda"),
                                             table.strings("classification"))}
    plotted = set()
    for gid, xy in points.items():
        if not gid.startswith("class:"):
            continue
        label = gid.split(":", 1)[1]
        for omega, lam in np.asarray(xy):
            plotted.add((fmt(float(omega)), fmt(float(lam)), label))
    assert plotted == source


def test_series_roundtrip(data_dir, tmp_path):
    path = data_dir / "dyn_hi" / "series.csv"
    spec = FigureSpec("fig3", [str(path)], str(tmp_path / "fig3.png"),
                      Style(inf_t=0.236))
    points = extract_points(build_figure(spec))
    table = read_table(path)
    xy = points["series:series"]
    assert [fmt(v) for v in xy[:, 1]] == table.raw("O22")
