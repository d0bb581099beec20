"""seedalloc-plot: render figures from seedalloc experiment CSVs."""

from __future__ import annotations

import argparse
import sys

import pandas.errors

from .figures import KINDS, FigureError, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seedalloc-plot",
        description="Render stacked-regret or runtime figures from a "
                    "seedalloc results CSV")
    parser.add_argument("--csv", required=True, help="results CSV path")
    parser.add_argument("--kind", choices=KINDS, default="regret-stacked")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    parser.add_argument("--error-bars", action="store_true",
                        help="draw standard-error whiskers on the stacks")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(csv_path=args.csv, kind=args.kind,
                          out_dir=args.out, image_format=args.format,
                          error_bars=args.error_bars)
        written = render(spec)
    except (FigureError, FileNotFoundError,
            pandas.errors.EmptyDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
