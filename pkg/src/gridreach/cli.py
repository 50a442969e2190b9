"""Command-line interface.

Exit codes: 0 = reachable / success, 1 = unreachable / check failure,
2 = input error, 3 = internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional

from . import mutations
from .gadget import GadgetInvariantError, LevelInvariantError
from .grid import (
    GridFormatError,
    GridGraph,
    VertexId,
    bfs_reachable,
    bfs_reachable_set,
    gen_random,
    parse_grid,
    write_grid,
)
from .ledger import LedgerError
from .pipeline import PipelineError, SolveConfig, solve, solve_all_pairs
from .separator import STRATEGIES, SeparatorError
from .token_eval import TokenEvalError

EXIT_REACHABLE = 0
EXIT_UNREACHABLE = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3

_INVARIANT_ERRORS = (
    GadgetInvariantError,
    LevelInvariantError,
    SeparatorError,
    TokenEvalError,
    LedgerError,
)

MUTATION_FLAGS = {
    "skip-level-shift-pass": "SKIP_LEVEL_SHIFT_PASS",
    "ignore-path-function": "IGNORE_PATH_FUNCTION",
}


def _read_grid(path: str) -> GridGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_grid(fh.read())


def _solve_config(args: argparse.Namespace) -> SolveConfig:
    return SolveConfig(
        mode=args.mode,
        inner=args.inner,
        separator=args.separator,
        target_side=args.target_side,
        cutoff=args.cutoff,
        checks=not args.no_checks,
    )


def cmd_solve(args: argparse.Namespace) -> int:
    grid = _read_grid(args.file)
    report = solve(grid, _solve_config(args))
    print("reachable" if report.reachable else "unreachable")
    if args.ledger:
        print(f"peak_words={report.peak_words}")
        print(f"stitched_vertices={report.stitched_vertices}")
        print(f"stitched_edges={report.stitched_edges}")
        print(f"n_blocks={report.n_blocks}")
        for phase, peak in sorted(report.phase_peaks.items()):
            print(f"phase_peak[{phase}]={peak}")
        print(f"elapsed={report.elapsed:.3f}")
    return EXIT_REACHABLE if report.reachable else EXIT_UNREACHABLE


def cmd_oracle(args: argparse.Namespace) -> int:
    grid = _read_grid(args.file)
    ok = bfs_reachable(grid)
    print("reachable" if ok else "unreachable")
    return EXIT_REACHABLE if ok else EXIT_UNREACHABLE


def cmd_gen(args: argparse.Namespace) -> int:
    if not 0.0 <= args.density <= 1.0:
        raise GridFormatError("density must lie in [0, 1]", 0)
    grid = gen_random(args.width, args.height, args.density, args.seed)
    text = write_grid(grid)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    sides = [int(s) for s in args.sides.split(",") if s]
    modes = ["streamed", "materialized"] if args.mode == "both" else [args.mode]
    rows = []
    for side in sides:
        for trial in range(args.trials):
            grid = gen_random(side, side, args.density, args.seed + trial)
            for mode in modes:
                report = solve(
                    grid,
                    SolveConfig(mode=mode, cutoff=args.cutoff, checks=args.checks),
                )
                row = {
                    "side": side,
                    "n_cells": report.n_cells,
                    "trial": trial,
                    "mode": mode,
                    "reachable": int(report.reachable),
                    "peak_words": report.peak_words,
                    "stitched_vertices": report.stitched_vertices,
                    "stitched_edges": report.stitched_edges,
                    "n_blocks": report.n_blocks,
                    "elapsed": f"{report.elapsed:.3f}",
                }
                rows.append(row)
                print(
                    f"side={side} trial={trial} mode={mode} "
                    f"peak_words={report.peak_words} elapsed={report.elapsed:.1f}s",
                    flush=True,
                )
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
    return 0


def run_check(full: bool = False, log=print) -> list[str]:
    """Self-check battery; returns a list of failure descriptions."""
    failures: list[str] = []

    def compare(grid: GridGraph, config: SolveConfig, what: str) -> None:
        try:
            got = solve(grid, config).reachable
        except _INVARIANT_ERRORS as exc:
            failures.append(f"{what}: invariant violation: {exc}")
            return
        want = bfs_reachable(grid)
        if got != want:
            failures.append(f"{what}: solve={got} oracle={want}")

    # exhaustive all-pairs sweep over every 2x2 grid
    from .grid import DIR_DELTAS

    slots = []
    for y in range(2):
        for x in range(2):
            for d in range(4):
                dx, dy = DIR_DELTAS[d]
                if 0 <= x + dx < 2 and 0 <= y + dy < 2:
                    slots.append((y * 2 + x, d))
    for bits in range(1 << len(slots)):
        masks = [0, 0, 0, 0]
        for j, (i, d) in enumerate(slots):
            if bits >> j & 1:
                masks[i] |= 1 << d
        grid = GridGraph(2, 2, tuple(masks), VertexId(0, 0), VertexId(1, 1))
        try:
            pairs = solve_all_pairs(grid)
        except _INVARIANT_ERRORS as exc:
            failures.append(f"2x2 sweep #{bits}: invariant violation: {exc}")
            break
        bad = False
        for y in range(2):
            for x in range(2):
                reach = bfs_reachable_set(grid, VertexId(x, y)) | {(x, y)}
                for ty in range(2):
                    for tx in range(2):
                        if (((x, y), (tx, ty)) in pairs) != ((tx, ty) in reach):
                            bad = True
        if bad:
            failures.append(f"2x2 sweep: mask set {tuple(masks)} disagrees with oracle")
    log(f"2x2 exhaustive sweep: {'ok' if not failures else 'FAILED'}")

    # mandatory-successor semantics: a token bound to a chain must not leave
    # it mid-way (deterministic probe for the evaluator's path function)
    from .gadget import GadgetEdge
    from .levels import INF, ZERO
    from .token_eval import build_kinv, token_reachable

    chain_edges = {
        (0, 1): GadgetEdge(0, 1, frozenset({(ZERO, INF)}), (1, 2)),
        (1, 2): GadgetEdge(1, 2, frozenset({(ZERO, INF)}), None),
        (1, 3): GadgetEdge(1, 3, frozenset({(ZERO, INF)}), None),
    }
    chain_kinv = build_kinv(chain_edges)
    before = len(failures)
    if token_reachable(chain_edges, chain_kinv, 0, 2) is not True:
        failures.append("path function probe: chain end not reached")
    if token_reachable(chain_edges, chain_kinv, 0, 3) is not False:
        failures.append("path function probe: bound token left its chain")
    log(f"path function semantics: {'ok' if len(failures) == before else 'FAILED'}")

    # per-block equivalence: token reachability on the transformed gadget must
    # match the circle graph exactly, over all ordered rim pairs
    import random as _random

    from .blocks import Block, block_subgraph, rim_cycle
    from .circle import build_circle
    from .gadget import transform

    before = len(failures)
    for seed in range(12 if full else 6):
        rng = _random.Random(900 + seed)
        w, h = rng.randint(3, 6), rng.randint(3, 6)
        frag_grid = gen_random(w, h, rng.choice((0.4, 0.6, 0.8)), 900 + seed)
        rim = rim_cycle(w, h)
        block = Block(0, 0, 0, w, h, rim, {c: i for i, c in enumerate(rim)})
        frag = block_subgraph(frag_grid, block)
        circle = build_circle(frag, rim)
        try:
            gadget = transform(circle)
        except _INVARIANT_ERRORS as exc:
            failures.append(f"block #{seed}: invariant violation: {exc}")
            continue
        kinv = build_kinv(gadget.edges)
        for u in range(circle.n):
            for v in range(circle.n):
                if u == v:
                    continue
                got = token_reachable(gadget.edges, kinv, u, v)
                if got != circle.has(u, v):
                    failures.append(
                        f"block #{seed}: token {u}->{v} = {got}, circle = {circle.has(u, v)}"
                    )
    log(f"block gadget equivalence: {'ok' if len(failures) == before else 'FAILED'}")

    # random grids, both modes, both separator strategies

    n_random = 60 if full else 24
    before = len(failures)
    for seed in range(n_random):
        rng = _random.Random(seed)
        w, h = rng.randint(2, 10), rng.randint(2, 10)
        grid = gen_random(w, h, rng.choice((0.3, 0.5, 0.7)), seed)
        compare(grid, SolveConfig(mode="streamed"), f"random #{seed} streamed")
        compare(grid, SolveConfig(mode="materialized"), f"random #{seed} materialized")
        if full:
            compare(
                grid,
                SolveConfig(separator="fundamental-cycle"),
                f"random #{seed} fundamental-cycle",
            )
            compare(grid, SolveConfig(inner="separator"), f"random #{seed} inner-sep")
    log(f"random oracle comparison: {'ok' if len(failures) == before else 'FAILED'}")

    if full:
        before = len(failures)
        for seed, side in enumerate((14, 18, 22)):
            grid = gen_random(side, side, 0.55, 1000 + seed)
            compare(grid, SolveConfig(), f"large #{side} streamed")
        log(f"larger instances: {'ok' if len(failures) == before else 'FAILED'}")
    return failures


def cmd_check(args: argparse.Namespace) -> int:
    from .pipeline import _gadget_for_fragment

    def run() -> list[str]:
        _gadget_for_fragment.cache_clear()
        try:
            return run_check(full=args.full)
        finally:
            _gadget_for_fragment.cache_clear()

    if args.mutate:
        flag = MUTATION_FLAGS.get(args.mutate)
        if flag is None:
            raise GridFormatError(f"unknown mutation {args.mutate!r}", 0)
        with mutations.enabled(flag):
            failures = run()
    else:
        failures = run()
    for f in failures:
        print(f"FAIL {f}")
    print(f"check: {len(failures)} failure(s)")
    return 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridreach")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="decide s->t reachability via the block pipeline")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=("streamed", "materialized"), default="streamed")
    sp.add_argument("--inner", choices=("bfs", "separator"), default="bfs")
    sp.add_argument("--separator", choices=STRATEGIES, default="auto")
    sp.add_argument("--cutoff", type=int, default=64)
    sp.add_argument("--target-side", type=int, default=None)
    sp.add_argument("--no-checks", action="store_true")
    sp.add_argument("--ledger", action="store_true", help="print space accounting")
    sp.set_defaults(func=cmd_solve)

    op = sub.add_parser("oracle", help="answer by plain BFS (reference)")
    op.add_argument("file")
    op.set_defaults(func=cmd_oracle)

    gp = sub.add_parser("gen", help="generate a random grid instance")
    gp.add_argument("--width", type=int, required=True)
    gp.add_argument("--height", type=int, required=True)
    gp.add_argument("--density", type=float, required=True)
    gp.add_argument("--seed", type=int, required=True)
    gp.add_argument("-o", "--output", default=None)
    gp.set_defaults(func=cmd_gen)

    bp = sub.add_parser("bench", help="peak-space scaling benchmark")
    bp.add_argument("--sides", default="8,27,64")
    bp.add_argument("--trials", type=int, default=1)
    bp.add_argument("--density", type=float, default=0.55)
    bp.add_argument("--seed", type=int, default=42)
    bp.add_argument("--mode", choices=("streamed", "materialized", "both"), default="both")
    bp.add_argument("--cutoff", type=int, default=64)
    bp.add_argument("--checks", action="store_true", help="keep invariant assertions on")
    bp.add_argument("--csv", default=None)
    bp.set_defaults(func=cmd_bench)

    cp = sub.add_parser("check", help="self-check against the BFS oracle")
    cp.add_argument("--full", action="store_true")
    cp.add_argument("--mutate", default=None, choices=sorted(MUTATION_FLAGS))
    cp.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GridFormatError, PipelineError, FileNotFoundError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _INVARIANT_ERRORS as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
