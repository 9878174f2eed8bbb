#!/usr/bin/env python3
"""Produce the full CSV set behind the standard figures in one run.

Each job is a plain CLI invocation, so the emitted files are exactly what
any downstream consumer of the command-line interface would see.  At the
default grid this takes a few minutes on one core; pass --grid-scale 0.5
for a quick draft set.
"""

import argparse
import pathlib
import sys
import time

from bwdelay.cli import main as bwdelay_main

JOBS = [
    # short-spectrum figure: one-pulse curve plus doubles at three gaps
    ("fig2_spectrum.csv", ["spectrum", "--preset", "fig2"]),
    # delay-scan ratio curves at three intensities
    ("fig3_blue_sweep.csv", ["sweep", "--preset", "fig3-blue"]),
    ("fig3_green_sweep.csv", ["sweep", "--preset", "fig3-green"]),
    ("fig3_xi1_sweep.csv", ["sweep", "--preset", "p2-xi1"]),
    # order-exchange scans for the unequal pairs
    ("fig4_exchange.csv", ["exchange", "--preset", "fig4"]),
    ("fig5_exchange.csv", ["exchange", "--preset", "fig5"]),
    ("fig5_xia15_exchange.csv", ["exchange", "--preset", "fig5-xia15"]),
    # closed-form interference model over the same delay scan
    ("model_p1.csv", ["model", "--preset", "P1"]),
]


def run(out_dir: pathlib.Path, grid_scale: float) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, argv in JOBS:
        target = out_dir / name
        t0 = time.perf_counter()
        rc = bwdelay_main(
            argv + ["--grid-scale", str(grid_scale), "--out", str(target)]
        )
        if rc != 0:
            print(f"FAILED ({rc}): {' '.join(argv)}", file=sys.stderr)
            return rc
        print(f"{target}  [{time.perf_counter() - t0:.1f}s]")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="out", type=pathlib.Path)
    ap.add_argument("--grid-scale", default=1.0, type=float)
    args = ap.parse_args()
    sys.exit(run(args.out_dir, args.grid_scale))
