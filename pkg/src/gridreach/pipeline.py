"""End-to-end solver: blocks -> circle graphs -> gadgets -> leveled search.

The grid is cut into blocks of side about the cube root of the cell count.
Each block contributes a plane gadget graph over its rim; grid edges crossing
a cut become *seam* edges between the rims of neighbouring blocks, labeled
``0 -> inf`` like intra-block rim reachability.  Source-to-target reachability
in the grid is then a token query on the stitched graph, answered by the
separator-based leveled search.

Two stitching modes:

* ``materialized`` — every block gadget is built once and held; the space
  ledger charges the whole stitched graph.
* ``streamed`` — gadgets are rebuilt on demand through a one-block cache and
  seam edges are derived from the grid when asked for; the ledger charges
  only the cache, the frontier tables, and the separator stack.
"""

from __future__ import annotations

import time
from collections import OrderedDict
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .blocks import (
    BlockSet,
    GridFragment,
    block_subgraph,
    decompose,
    make_block,
    rim_cycle,
    rim_position,
)
from .circle import build_circle
from .gadget import GadgetEdge, GadgetGraph, transform
from . import mutations
from .grid import DIR_DELTAS, GridGraph
from .ledger import SpaceLedger, words_for_edges
from .levels import INF, ZERO
from .separator import reach_boolean, reach_leveled
from .token_eval import build_kinv

GlobalVertex = tuple[int, int]  # (block index, gadget vertex id)
GlobalEdgeKey = tuple[GlobalVertex, GlobalVertex]

SEAM_LABELS = frozenset({(ZERO, INF)})


@dataclass(frozen=True)
class SolveConfig:
    mode: str = "streamed"  # "streamed" or "materialized"
    inner: str = "bfs"  # per-block rim reachability: "bfs" or "separator"
    separator: str = "auto"  # strategy of the recursive search
    target_side: Optional[int] = None  # default: cube root of the cell count
    cutoff: int = 64  # base-case size of the recursive search
    checks: bool = True  # run transform invariant assertions


@dataclass
class SolveReport:
    reachable: bool
    mode: str
    n_cells: int
    n_blocks: int
    stitched_vertices: int
    stitched_edges: int
    peak_words: int
    phase_peaks: dict[str, int]
    sep_stats: list[tuple[int, int, int]]  # (n, |separator|, larger side)
    elapsed: float


class PipelineError(ValueError):
    pass


# -- block gadget construction ----------------------------------------------------


def build_block_gadget(
    grid: GridGraph,
    bset: BlockSet,
    index: int,
    checks: bool = True,
    inner: str = "bfs",
) -> GadgetGraph:
    block = make_block(bset, index)
    frag = block_subgraph(grid, block)
    return _gadget_for_fragment(
        frag.width,
        frag.height,
        frag.out_mask,
        checks,
        inner,
        # fault-injection flags change the transform result, so they are part
        # of the memoisation key
        mutations.SKIP_LEVEL_SHIFT_PASS,
    )


@lru_cache(maxsize=512)
def _gadget_for_fragment(
    width: int,
    height: int,
    out_mask: tuple[int, ...],
    checks: bool,
    inner: str,
    _mutated: bool = False,
) -> GadgetGraph:
    """Transform memoised on the block's content; blocks repeat heavily in
    exhaustive small-grid sweeps.  The result is immutable, so sharing is
    safe, and the space ledger still charges every (re)load of a block."""
    frag = GridFragment(width, height, out_mask, (0, 0))
    reach_rows = None
    if inner == "separator":
        cells = {(x, y) for y in range(height) for x in range(width)}
        reach_rows = lambda cell: reach_boolean(
            cells, lambda c: frag.out_neighbors(*c), {cell}, cells
        )
    elif inner != "bfs":
        raise PipelineError(f"unknown inner solver {inner!r}")
    circle = build_circle(frag, rim_cycle(width, height), reach_rows)
    return transform(circle, checks=checks)


def _globalize(gadget: GadgetGraph, bi: int) -> dict[GlobalEdgeKey, GadgetEdge]:
    out: dict[GlobalEdgeKey, GadgetEdge] = {}
    for (t, h), e in gadget.edges.items():
        ksucc = None if e.ksucc is None else ((bi, e.ksucc[0]), (bi, e.ksucc[1]))
        out[((bi, t), (bi, h))] = GadgetEdge((bi, t), (bi, h), e.labels, ksucc)
    return out


def iter_seam_keys(
    grid: GridGraph, bset: BlockSet, only_block: Optional[int] = None
) -> Iterator[GlobalEdgeKey]:
    """Seam edge keys derived from the grid, optionally only those whose tail
    lies in one block.  Nothing is stored; boundary cells are re-scanned."""
    n_blocks = bset.n_blocks
    indices = range(n_blocks) if only_block is None else (only_block,)
    for bi in indices:
        x0, y0, w, h = bset.block_bounds(bi)
        for lx, ly in _boundary_cells(w, h):
            gx, gy = x0 + lx, y0 + ly
            mask = grid.out_mask[grid.index(gx, gy)]
            for d in range(4):
                if not mask & (1 << d):
                    continue
                dx, dy = DIR_DELTAS[d]
                nx, ny = gx + dx, gy + dy
                bj = bset.block_of(nx, ny)
                if bj == bi:
                    continue
                xj, yj, wj, hj = bset.block_bounds(bj)
                pa = rim_position(w, h, lx, ly)
                pb = rim_position(wj, hj, nx - xj, ny - yj)
                yield ((bi, pa), (bj, pb))


def _boundary_cells(w: int, h: int) -> Iterator[tuple[int, int]]:
    for x in range(w):
        yield (x, 0)
        if h > 1:
            yield (x, h - 1)
    for y in range(1, h - 1):
        yield (0, y)
        if w > 1:
            yield (w - 1, y)


def _seam_edge(key: GlobalEdgeKey) -> GadgetEdge:
    return GadgetEdge(key[0], key[1], SEAM_LABELS, None)


# -- stitched views ----------------------------------------------------------------


def build_materialized(
    grid: GridGraph,
    bset: BlockSet,
    ledger: SpaceLedger,
    checks: bool = True,
    inner: str = "bfs",
) -> tuple[dict[GlobalEdgeKey, GadgetEdge], dict]:
    """The whole stitched graph as a dict, charged to the ledger."""
    edges: dict[GlobalEdgeKey, GadgetEdge] = {}
    for bi in range(bset.n_blocks):
        edges.update(
            _globalize(build_block_gadget(grid, bset, bi, checks, inner), bi)
        )
    for key in iter_seam_keys(grid, bset):
        edges[key] = _seam_edge(key)
    kinv = build_kinv(edges)
    ledger.alloc(words_for_edges(edges), "stitched edges")
    ledger.alloc(2 * len(kinv), "path function index")
    return edges, kinv


class StreamedEdges(Mapping):
    """Lazy stitched graph: one block's gadget cached at a time.

    Iteration is block-major, so whole-graph passes rebuild each gadget once;
    random access to another block evicts the cache (and its ledger charge).
    Seam edges are synthesised from the grid on every access.
    """

    def __init__(
        self,
        grid: GridGraph,
        bset: BlockSet,
        ledger: SpaceLedger,
        checks: bool = True,
        inner: str = "bfs",
        cache_blocks: int = 1,
    ):
        self.grid = grid
        self.bset = bset
        self.ledger = ledger
        self.checks = checks
        self.inner = inner
        self.cache_blocks = cache_blocks
        self._cache: OrderedDict[int, tuple[dict, dict]] = OrderedDict()
        self._len: Optional[int] = None
        self.rebuilds = 0

    # cache management

    def _block(self, bi: int) -> tuple[dict, dict]:
        """(globalized edges, local path-function inverse) of one block."""
        hit = self._cache.get(bi)
        if hit is not None:
            self._cache.move_to_end(bi)
            return hit
        gadget = build_block_gadget(self.grid, self.bset, bi, self.checks, self.inner)
        edges = _globalize(gadget, bi)
        kinv = build_kinv(edges)
        self.rebuilds += 1
        while len(self._cache) >= self.cache_blocks:
            _, (old_edges, old_kinv) = self._cache.popitem(last=False)
            self.ledger.free(
                words_for_edges(old_edges) + 2 * len(old_kinv), "gadget cache"
            )
        self.ledger.alloc(words_for_edges(edges) + 2 * len(kinv), "gadget cache")
        self._cache[bi] = (edges, kinv)
        return self._cache[bi]

    def drop_cache(self) -> None:
        while self._cache:
            _, (old_edges, old_kinv) = self._cache.popitem(last=False)
            self.ledger.free(
                words_for_edges(old_edges) + 2 * len(old_kinv), "gadget cache"
            )

    # the recursive search calls this once it has taken its last full pass
    release = drop_cache

    # Mapping protocol

    def __iter__(self) -> Iterator[GlobalEdgeKey]:
        for bi in range(self.bset.n_blocks):
            yield from self._block(bi)[0]
            yield from iter_seam_keys(self.grid, self.bset, bi)

    def __len__(self) -> int:
        if self._len is None:
            self._len = sum(1 for _ in self)
        return self._len

    def items(self):
        # block-major pass that avoids per-key __getitem__ dispatch
        for bi in range(self.bset.n_blocks):
            yield from self._block(bi)[0].items()
            for key in iter_seam_keys(self.grid, self.bset, bi):
                yield key, _seam_edge(key)

    def __getitem__(self, key: GlobalEdgeKey) -> GadgetEdge:
        (bi, _), (bj, _) = key
        if bi == bj:
            edges = self._block(bi)[0]
            return edges[key]
        if self._is_seam(key):
            return _seam_edge(key)
        raise KeyError(key)

    def _is_seam(self, key: GlobalEdgeKey) -> bool:
        (bi, pa), (bj, pb) = key
        if not (0 <= bi < self.bset.n_blocks and 0 <= bj < self.bset.n_blocks):
            return False
        xa, ya, wa, ha = self.bset.block_bounds(bi)
        xb, yb, wb, hb = self.bset.block_bounds(bj)
        try:
            ca = _rim_cell(wa, ha, pa)
            cb = _rim_cell(wb, hb, pb)
        except IndexError:
            return False
        ax, ay = xa + ca[0], ya + ca[1]
        bx, by = xb + cb[0], yb + cb[1]
        if abs(ax - bx) + abs(ay - by) != 1:
            return False
        return self.grid.has_edge(ax, ay, bx, by)


class StreamedKinv:
    """Path-function inverse resolved through the block cache; chains never
    cross seams, so every lookup is local to one block."""

    def __init__(self, view: StreamedEdges):
        self.view = view

    def get(self, key: GlobalEdgeKey, default=None):
        (bi, _), (bj, _) = key
        if bi != bj:
            return default
        return self.view._block(bi)[1].get(key, default)


def _rim_cell(w: int, h: int, pos: int) -> tuple[int, int]:
    """Inverse of ``rim_position`` in O(1)."""
    if w == 1:
        if not 0 <= pos < h:
            raise IndexError(pos)
        return (0, pos)
    if h == 1:
        if not 0 <= pos < w:
            raise IndexError(pos)
        return (pos, 0)
    if pos < 0:
        raise IndexError(pos)
    if pos < w:
        return (pos, 0)
    if pos < w - 1 + h - 1:
        return (w - 1, pos - (w - 1))
    if pos < 2 * (w - 1) + h - 1:
        return (2 * (w - 1) + h - 1 - pos, h - 1)
    if pos < 2 * (w - 1) + 2 * (h - 1):
        return (0, 2 * (w - 1) + 2 * (h - 1) - pos)
    raise IndexError(pos)


# -- solve --------------------------------------------------------------------------


def solve_all_pairs(grid: GridGraph, cutoff: int = 64) -> set[tuple[tuple[int, int], tuple[int, int]]]:
    """All reachable (s, t) cell pairs, one leveled search per source.

    Valid only when every cell sits on its block's rim (true whenever every
    block is at most two cells wide or tall), because then the stitched graph
    does not depend on the choice of s and t.  Used for exhaustive sweeps
    over tiny grids, where running ``solve`` per pair would redo identical
    stitching work quadratically often.
    """
    bset = decompose(grid, 2)
    ledger = SpaceLedger()
    for bi in range(bset.n_blocks):
        _, _, w, h = bset.block_bounds(bi)
        if w > 2 and h > 2:
            raise PipelineError("solve_all_pairs requires all cells on block rims")
    edges, kinv = build_materialized(grid, bset, ledger)
    vertices: set[GlobalVertex] = set()
    for (u, v) in edges:
        vertices.add(u)
        vertices.add(v)

    def cell_of(gv: GlobalVertex) -> tuple[int, int]:
        x0, y0, w, h = bset.block_bounds(gv[0])
        lx, ly = _rim_cell(w, h, gv[1])
        return (x0 + lx, y0 + ly)

    def vertex_of(x: int, y: int) -> GlobalVertex:
        bi = bset.block_of(x, y)
        x0, y0, w, h = bset.block_bounds(bi)
        return (bi, rim_position(w, h, x - x0, y - y0))

    pairs: set[tuple[tuple[int, int], tuple[int, int]]] = set()
    outer = {}
    for y in range(grid.height):
        for x in range(grid.width):
            outer[(x, y)] = vertex_of(x, y)
    for sc, sv in outer.items():
        pairs.add((sc, sc))
        if sv not in vertices:
            continue
        hits = reach_leveled(
            edges, kinv, vertices, {(sv, None): INF}, set(vertices), cutoff=cutoff
        )
        reached = {c[0] for c in hits}
        for tc, tv in outer.items():
            if tv in reached:
                pairs.add((sc, tc))
    return pairs


def solve(grid: GridGraph, config: SolveConfig = SolveConfig()) -> SolveReport:
    t_start = time.monotonic()
    if config.mode not in ("streamed", "materialized"):
        raise PipelineError(f"unknown mode {config.mode!r}")
    ledger = SpaceLedger()
    n_cells = grid.width * grid.height

    if grid.s == grid.t:
        return SolveReport(
            True, config.mode, n_cells, 0, 0, 0, 0, {}, [], time.monotonic() - t_start
        )

    with ledger.phase("decompose"):
        bset = decompose(grid, config.target_side)

    with ledger.phase("stitch"):
        if config.mode == "materialized":
            edges, kinv = build_materialized(
                grid, bset, ledger, config.checks, config.inner
            )
        else:
            edges = StreamedEdges(grid, bset, ledger, config.checks, config.inner)
            kinv = StreamedKinv(edges)

    # the search operates on vertices that carry at least one edge; an
    # isolated source or target settles the answer immediately
    vertices: set[GlobalVertex] = set()
    n_edges = 0
    for (u, v) in edges:
        vertices.add(u)
        vertices.add(v)
        n_edges += 1

    sb = bset.block_of(grid.s.x, grid.s.y)
    tb = bset.block_of(grid.t.x, grid.t.y)
    xs, ys, ws, hs = bset.block_bounds(sb)
    xt, yt, wt, ht = bset.block_bounds(tb)
    sv = (sb, rim_position(ws, hs, grid.s.x - xs, grid.s.y - ys))
    tv = (tb, rim_position(wt, ht, grid.t.x - xt, grid.t.y - yt))

    reachable = False
    sep_stats: list[tuple[int, int, int]] = []
    if sv in vertices and tv in vertices:
        with ledger.phase("search"):
            with ledger.tracked(3, "query endpoints"):
                hits = reach_leveled(
                    edges,
                    kinv,
                    vertices,
                    {(sv, None): INF},
                    {tv},
                    cutoff=config.cutoff,
                    ledger=ledger,
                    strategy=config.separator,
                    stats=sep_stats,
                )
            reachable = bool(hits)

    if config.mode == "materialized":
        ledger.free(words_for_edges(edges), "stitched edges")
        ledger.free(2 * len(kinv), "path function index")
    else:
        edges.drop_cache()
    ledger.assert_settled()

    return SolveReport(
        reachable=reachable,
        mode=config.mode,
        n_cells=n_cells,
        n_blocks=bset.n_blocks,
        stitched_vertices=len(vertices),
        stitched_edges=n_edges,
        peak_words=ledger.peak,
        phase_peaks=dict(ledger.phase_peaks),
        sep_stats=sep_stats,
        elapsed=time.monotonic() - t_start,
    )
