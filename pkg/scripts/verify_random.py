#!/usr/bin/env python3
"""Cross-check the solver against the brute-force oracle on random grids.

Usage:
    python3 scripts/verify_random.py --count 200 --min-side 6 --max-side 16
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from gridreach.grid import bfs_reachable, gen_random
from gridreach.pipeline import SolveConfig, solve

DENSITIES = (0.3, 0.5, 0.7, 0.9)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--min-side", type=int, default=6)
    ap.add_argument("--max-side", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mode", default="materialized")
    ap.add_argument("--separator", default="auto")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    cfg = SolveConfig(mode=args.mode, separator=args.separator)
    t0 = time.monotonic()
    bad = 0
    for i in range(args.count):
        w = rng.randint(args.min_side, args.max_side)
        h = rng.randint(args.min_side, args.max_side)
        g = gen_random(w, h, DENSITIES[i % len(DENSITIES)], rng.randrange(1 << 30))
        got = solve(g, cfg).reachable
        want = bfs_reachable(g)
        if got != want:
            bad += 1
            print(f"MISMATCH: {w}x{h} seed-index {i}: solver {got}, oracle {want}")
        if (i + 1) % 50 == 0:
            print(f"{i + 1}/{args.count} checked, {bad} mismatches", flush=True)
    dt = time.monotonic() - t0
    print(f"done: {args.count} instances, {bad} mismatches, {dt:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
