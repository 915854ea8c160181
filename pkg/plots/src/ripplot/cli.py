"""render: compose spectrum-CSV heatmap panels into one image."""
from __future__ import annotations

import argparse
import os
import sys

from .panels import PanelSpec, PlotInputError, render_panels


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render emission-spectrum CSV sweeps as heatmap panels.",
    )
    parser.add_argument("csvs", nargs="+", metavar="spec.csv")
    parser.add_argument("--layout", default=None, help="grid like 2x3; default 1xN")
    parser.add_argument("--out", default="panels.png")
    parser.add_argument("--scale", choices=["linear", "log"], default="log")
    parser.add_argument("--titles", default=None,
                        help="comma-separated panel titles; default CSV stems")
    args = parser.parse_args(argv)

    layout = args.layout or f"1x{len(args.csvs)}"
    if args.titles is not None:
        titles = args.titles.split(",")
        if len(titles) != len(args.csvs):
            print(f"error: {len(titles)} titles for {len(args.csvs)} panels",
                  file=sys.stderr)
            return 2
    else:
        titles = [os.path.splitext(os.path.basename(p))[0] for p in args.csvs]

    specs = [
        PanelSpec(csv_path=p, title=t, color_scale=args.scale,
                  output_image_path=args.out)
        for p, t in zip(args.csvs, titles)
    ]
    try:
        path = render_panels(specs, layout, args.out)
    except PlotInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
