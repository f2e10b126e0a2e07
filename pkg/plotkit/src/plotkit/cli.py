"""Command line: one figure id + input paths -> one image, or a batch manifest."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .csvio import SchemaError
from .figspec import FIGURE_IDS, FigureSpec, Style
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render figures from simulation CSV/JSON outputs")
    parser.add_argument("figure", choices=FIGURE_IDS + ("batch",),
                        help="figure id, or 'batch' with a manifest JSON")
    parser.add_argument("inputs", nargs="+",
                        help="input CSV path(s); for 'batch', one manifest JSON")
    parser.add_argument("-o", "--out", default="figure.png",
                        help="output image path (default figure.png)")
    parser.add_argument("--scar-threshold", type=float, default=1e-2,
                        help="overlap^2 above which spectrum points are highlighted")
    parser.add_argument("--inf-t", type=float, default=None,
                        help="infinite-temperature reference value for series panels")
    parser.add_argument("--manifest", default=None,
                        help="sweep manifest JSON providing frequency overlays (fig5b)")
    return parser


def _spec_from_args(args) -> FigureSpec:
    style = Style(scar_threshold=args.scar_threshold, inf_t=args.inf_t,
                  manifest=args.manifest)
    return FigureSpec(figure=args.figure, inputs=list(args.inputs),
                      out=args.out, style=style)


def run_batch(manifest_path: str) -> list[Path]:
    """Render every entry of a batch manifest: a JSON list of figure specs."""
    entries = json.loads(Path(manifest_path).read_text())
    if not isinstance(entries, list):
        raise SchemaError(f"{manifest_path}: batch manifest must be a JSON list")
    outputs = []
    for entry in entries:
        style = Style(**entry.get("style", {}))
        spec = FigureSpec(figure=entry["figure"], inputs=entry["inputs"],
                          out=entry["out"], style=style)
        outputs.append(render(spec))
    return outputs


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.figure == "batch":
            if len(args.inputs) != 1:
                raise SchemaError("batch takes exactly one manifest JSON path")
            for out in run_batch(args.inputs[0]):
                print(out)
        else:
            print(render(_spec_from_args(args)))
    except (SchemaError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
