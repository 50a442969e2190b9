#!/usr/bin/env python3
"""Space-scaling experiment: ledger peaks vs instance size, with slope fits.

Runs the solver on square grids of the given sides in both stitching modes,
collects the space-ledger peaks, and fits a log-log regression of peak words
against cell count per mode.  The streamed mode should come in well below
exponent 1/2; the materialized mode is dominated by the stitched graph and
should sit above 0.6.

Usage:
    python3 scripts/run_bench.py --sides 8,27,64,125 --trials 1 --csv out.csv
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time

from gridreach.grid import gen_random
from gridreach.pipeline import SolveConfig, solve


def fit_slope(points: list[tuple[int, int]]) -> float:
    """Least-squares slope of log(peak) against log(cells)."""
    xs = [math.log(n) for n, _ in points]
    ys = [math.log(p) for _, p in points]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sides", default="8,27,64,125")
    ap.add_argument("--trials", type=int, default=1)
    ap.add_argument("--density", type=float, default=0.55)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    sides = [int(s) for s in args.sides.split(",")]
    rows = []
    for side in sides:
        for trial in range(args.trials):
            g = gen_random(side, side, args.density, args.seed + trial)
            for mode in ("streamed", "materialized"):
                t0 = time.monotonic()
                report = solve(g, SolveConfig(mode=mode, checks=False))
                elapsed = time.monotonic() - t0
                rows.append(
                    {
                        "side": side,
                        "cells": side * side,
                        "trial": trial,
                        "mode": mode,
                        "reachable": int(report.reachable),
                        "peak_words": report.peak_words,
                        "elapsed_s": round(elapsed, 2),
                    }
                )
                print(
                    f"side={side} trial={trial} mode={mode} "
                    f"peak_words={report.peak_words} elapsed={elapsed:.1f}s",
                    flush=True,
                )

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)

    for mode in ("streamed", "materialized"):
        pts = {}
        for r in rows:
            if r["mode"] == mode:
                pts.setdefault(r["cells"], []).append(r["peak_words"])
        points = [(n, max(ps)) for n, ps in sorted(pts.items())]
        if len(points) >= 2:
            print(f"{mode}: slope = {fit_slope(points):.3f} over {points}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
