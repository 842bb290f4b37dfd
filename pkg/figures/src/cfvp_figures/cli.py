"""Command-line entry point: ``figures <figure-id> --in DIR --out PATH``.

Exit status mirrors the experiment CLI: 0 on success, 1 for unusable
input or arguments (messages name the offending column or value), 2 for
I/O failures.
"""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, FigureSpec, render


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; keep 2 for I/O problems only
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"figures: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="figures", description="Render charts from experiment CSVs.")
    parser.add_argument("figure_id", metavar="figure-id", choices=FIGURE_IDS,
                        help="one of " + ", ".join(FIGURE_IDS))
    parser.add_argument("--in", dest="indir", metavar="DIR", default=".",
                        help="directory holding the input CSVs (default: current)")
    parser.add_argument("--out", dest="out", metavar="PATH", default=None,
                        help="output image path; extension picks the format "
                             "(.png raster, .svg/.pdf vector; default <figure-id>.png)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = FigureSpec.for_directory(args.figure_id, args.indir, args.out)
        written = render(spec)
    except OSError as exc:
        print(f"figures: i/o error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"figures: {exc}", file=sys.stderr)
        return 1
    print(written)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
