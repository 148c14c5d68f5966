"""Command-line figure rendering from harness result files."""

from __future__ import annotations

import argparse
import sys

from .io import EmptySeriesError, MissingColumnError, SchemaError
from .render import FIGURE_KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpsfigures",
        description="Render figures from sweep summary CSV / power JSON files")
    parser.add_argument("input", help="summary CSV (curves) or power JSON (bars)")
    parser.add_argument("kind", choices=sorted(FIGURE_KINDS),
                        help="figure kind")
    parser.add_argument("output", help="output image path (png/pdf/svg)")
    parser.add_argument("--methods", default="",
                        help="comma-separated series filter (methods/structures)")
    parser.add_argument("--values", default="",
                        help="comma-separated sweep-value filter")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    methods = tuple(m for m in args.methods.split(",") if m)
    values = tuple(float(v) for v in args.values.split(",") if v)
    spec = FigureSpec(input_path=args.input, kind=args.kind,
                      output_path=args.output, methods=methods,
                      sweep_values=values)
    try:
        out = render(spec)
    except (SchemaError, MissingColumnError, EmptySeriesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
