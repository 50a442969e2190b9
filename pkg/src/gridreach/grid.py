"""Directed grid graphs: model, file format, generation, and a BFS oracle.

Vertices are the cells of a ``width x height`` rectangle, addressed by
``(x, y)`` with ``x`` growing rightwards and ``y`` growing downwards.  Edges
connect 4-neighbours only and each direction is independent.

File format (UTF-8, LF)::

    # comment
    grid <width> <height>
    s <x> <y>
    t <x> <y>
    e <x1> <y1> <x2> <y2>

with one ``e`` line per directed edge between Manhattan-distance-1 cells.
Canonical output orders edges by ``(y, x, direction)`` with direction order
N, E, S, W.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .rng import SplitMix64

# Direction bits: N (y-1), E (x+1), S (y+1), W (x-1).
DIR_N, DIR_E, DIR_S, DIR_W = 0, 1, 2, 3
DIR_DELTAS = ((0, -1), (1, 0), (0, 1), (-1, 0))
DIR_NAMES = ("N", "E", "S", "W")
_OPPOSITE = (DIR_S, DIR_W, DIR_N, DIR_E)


class GridFormatError(ValueError):
    """A malformed grid file; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class VertexId:
    x: int
    y: int

    def __iter__(self):
        return iter((self.x, self.y))


@dataclass(frozen=True)
class GridGraph:
    """An immutable directed grid graph with designated source and target."""

    width: int
    height: int
    out_mask: tuple[int, ...]  # per-cell 4-bit mask of outgoing directions
    s: VertexId
    t: VertexId

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        if len(self.out_mask) != self.width * self.height:
            raise ValueError("out_mask length does not match dimensions")
        for v in (self.s, self.t):
            if not self.in_bounds(v.x, v.y):
                raise ValueError(f"designated vertex {v} out of bounds")
        for idx, mask in enumerate(self.out_mask):
            x, y = idx % self.width, idx // self.width
            for d in range(4):
                if mask & (1 << d):
                    dx, dy = DIR_DELTAS[d]
                    if not self.in_bounds(x + dx, y + dy):
                        raise ValueError(
                            f"edge from ({x},{y}) direction {DIR_NAMES[d]} leaves the grid"
                        )

    # -- basics --------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self.width * self.height

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def index(self, x: int, y: int) -> int:
        return y * self.width + x

    def out_neighbors(self, x: int, y: int) -> Iterator[tuple[int, int]]:
        mask = self.out_mask[self.index(x, y)]
        for d in range(4):
            if mask & (1 << d):
                dx, dy = DIR_DELTAS[d]
                yield (x + dx, y + dy)

    def has_edge(self, x1: int, y1: int, x2: int, y2: int) -> bool:
        d = _direction_of(x1, y1, x2, y2)
        if d is None:
            return False
        return bool(self.out_mask[self.index(x1, y1)] & (1 << d))

    def edges(self) -> Iterator[tuple[int, int, int, int]]:
        """Directed edges in canonical (y, x, direction) order."""
        for y in range(self.height):
            for x in range(self.width):
                mask = self.out_mask[self.index(x, y)]
                for d in range(4):
                    if mask & (1 << d):
                        dx, dy = DIR_DELTAS[d]
                        yield (x, y, x + dx, y + dy)


def _direction_of(x1: int, y1: int, x2: int, y2: int) -> Optional[int]:
    for d, (dx, dy) in enumerate(DIR_DELTAS):
        if (x1 + dx, y1 + dy) == (x2, y2):
            return d
    return None


# -- parsing / writing ----------------------------------------------------


def parse_grid(text: str) -> GridGraph:
    width = height = None
    s = t = None
    masks: list[int] = []
    seen_edges: set[tuple[int, int, int]] = set()

    def require_header(line_no: int):
        if width is None:
            raise GridFormatError("expected 'grid <w> <h>' before this line", line_no)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "grid":
            if width is not None:
                raise GridFormatError("duplicate 'grid' header", line_no)
            if len(parts) != 3:
                raise GridFormatError("'grid' takes exactly two integers", line_no)
            try:
                width, height = int(parts[1]), int(parts[2])
            except ValueError:
                raise GridFormatError("'grid' dimensions must be integers", line_no)
            if width < 1 or height < 1:
                raise GridFormatError("grid dimensions must be positive", line_no)
            masks = [0] * (width * height)
        elif kind in ("s", "t"):
            require_header(line_no)
            if len(parts) != 3:
                raise GridFormatError(f"'{kind}' takes exactly two integers", line_no)
            try:
                x, y = int(parts[1]), int(parts[2])
            except ValueError:
                raise GridFormatError(f"'{kind}' coordinates must be integers", line_no)
            if not (0 <= x < width and 0 <= y < height):
                raise GridFormatError(f"'{kind}' vertex ({x},{y}) out of bounds", line_no)
            if kind == "s":
                if s is not None:
                    raise GridFormatError("duplicate 's' line", line_no)
                s = VertexId(x, y)
            else:
                if t is not None:
                    raise GridFormatError("duplicate 't' line", line_no)
                t = VertexId(x, y)
        elif kind == "e":
            require_header(line_no)
            if len(parts) != 5:
                raise GridFormatError("'e' takes exactly four integers", line_no)
            try:
                x1, y1, x2, y2 = (int(p) for p in parts[1:])
            except ValueError:
                raise GridFormatError("'e' coordinates must be integers", line_no)
            if not (0 <= x1 < width and 0 <= y1 < height):
                raise GridFormatError(f"edge tail ({x1},{y1}) out of bounds", line_no)
            if not (0 <= x2 < width and 0 <= y2 < height):
                raise GridFormatError(f"edge head ({x2},{y2}) out of bounds", line_no)
            d = _direction_of(x1, y1, x2, y2)
            if d is None:
                raise GridFormatError(
                    f"edge ({x1},{y1})->({x2},{y2}) does not join 4-neighbours", line_no
                )
            key = (x1, y1, d)
            if key in seen_edges:
                raise GridFormatError(
                    f"duplicate edge ({x1},{y1})->({x2},{y2})", line_no
                )
            seen_edges.add(key)
            masks[y1 * width + x1] |= 1 << d
        else:
            raise GridFormatError(f"unknown directive '{kind}'", line_no)

    last = text.count("\n") + 1
    if width is None:
        raise GridFormatError("missing 'grid' header", last)
    if s is None:
        raise GridFormatError("missing 's' line", last)
    if t is None:
        raise GridFormatError("missing 't' line", last)
    return GridGraph(width, height, tuple(masks), s, t)


def write_grid(g: GridGraph) -> str:
    lines = [f"grid {g.width} {g.height}", f"s {g.s.x} {g.s.y}", f"t {g.t.x} {g.t.y}"]
    for x1, y1, x2, y2 in g.edges():
        lines.append(f"e {x1} {y1} {x2} {y2}")
    return "\n".join(lines) + "\n"


# -- generation -----------------------------------------------------------


def gen_random(width: int, height: int, density: float, seed: int) -> GridGraph:
    """Random grid: each candidate directed edge kept independently.

    ``s`` and ``t`` are then drawn uniformly and distinct, all from one
    SplitMix64 stream, so instances are fully determined by the arguments.
    """
    if width * height < 2:
        raise ValueError("need at least two cells for distinct s and t")
    rng = SplitMix64(seed)
    masks = [0] * (width * height)
    for y in range(height):
        for x in range(width):
            for d in range(4):
                dx, dy = DIR_DELTAS[d]
                if 0 <= x + dx < width and 0 <= y + dy < height:
                    if rng.chance(density):
                        masks[y * width + x] |= 1 << d
    si = rng.next_below(width * height)
    while True:
        ti = rng.next_below(width * height)
        if ti != si:
            break
    s = VertexId(si % width, si // width)
    t = VertexId(ti % width, ti // width)
    return GridGraph(width, height, tuple(masks), s, t)


# -- reference reachability -----------------------------------------------


def bfs_reachable(g: GridGraph, frm: VertexId | None = None, to: VertexId | None = None) -> bool:
    """Plain BFS oracle over the full grid (linear space, used for checking)."""
    frm = frm if frm is not None else g.s
    to = to if to is not None else g.t
    if frm == to:
        return True
    seen = bytearray(g.n_vertices)
    seen[g.index(frm.x, frm.y)] = 1
    queue = deque([(frm.x, frm.y)])
    while queue:
        x, y = queue.popleft()
        for nx, ny in g.out_neighbors(x, y):
            if (nx, ny) == (to.x, to.y):
                return True
            ni = g.index(nx, ny)
            if not seen[ni]:
                seen[ni] = 1
                queue.append((nx, ny))
    return False


def bfs_reachable_set(g: GridGraph, frm: VertexId) -> set[tuple[int, int]]:
    """All cells reachable from ``frm`` (including itself)."""
    seen = bytearray(g.n_vertices)
    seen[g.index(frm.x, frm.y)] = 1
    out = {(frm.x, frm.y)}
    queue = deque([(frm.x, frm.y)])
    while queue:
        x, y = queue.popleft()
        for nx, ny in g.out_neighbors(x, y):
            ni = g.index(nx, ny)
            if not seen[ni]:
                seen[ni] = 1
                out.add((nx, ny))
                queue.append((nx, ny))
    return out
