"""Command-line entry: bwfigures <kind> input.csv [...] --out figure.png"""

from __future__ import annotations

import argparse
import sys

from .csvio import FigureInputError
from .render import KINDS, FigureJob, render


def _range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected LO:HI")
    return float(lo), float(hi)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bwfigures",
        description="Render figures from bwdelay CSV outputs.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind)
        nargs = 2 if kind == "model-overlay" else "+"
        p.add_argument("inputs", nargs=nargs, metavar="CSV")
        p.add_argument("--out", required=True, help="output image path")
        p.add_argument("--xlim", type=_range, default=None, metavar="LO:HI")
        p.add_argument("--ylim", type=_range, default=None, metavar="LO:HI")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = FigureJob(
        kind=args.kind,
        inputs=tuple(args.inputs),
        out=args.out,
        xlim=args.xlim,
        ylim=args.ylim,
    )
    try:
        render(job)
    except FigureInputError as exc:
        print(f"BWFIGURES_ERROR {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
