"""Per-block circle graphs and chord predicates.

For a block with rim cycle ``r_0 .. r_{n-1}`` (clockwise), the circle graph
has vertex set ``{0 .. n-1}`` and a directed edge ``(u, v)`` whenever the
block contains a directed path from rim vertex ``u`` to rim vertex ``v``
(``u != v``; cycle-adjacent pairs included like any other pair).

Chord predicates are expressed through clockwise/anticlockwise tours between
two positions on the rim circle:

* ``crosses(e1, e2)``: the endpoints of ``e2`` lie strictly on opposite open
  arcs of ``e1``.
* ``semi_crosses(e1, e2)``: same with closed arcs (endpoint sharing allowed).
* ``separates(e1, e2, e3)``: the heads of ``e2`` and ``e3`` lie on opposite
  closed arcs of ``e1``.

A sequence of edges is traversable when the first two semi-cross and each
later edge separates the heads of two earlier ones; traversability of
``(u_1,v_1) .. (u_k,v_k)`` forces ``(u_1, v_k)`` to be an edge as well, which
is the structural fact the transform leans on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .blocks import Block, GridFragment, fragment_reach_rows

Edge = tuple[int, int]


@dataclass(frozen=True)
class CircleGraph:
    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        for (u, v) in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u == v:
                raise ValueError("self-loops are not part of a circle graph")

    def has(self, u: int, v: int) -> bool:
        return (u, v) in self.edges


# -- tours ------------------------------------------------------------------


def cw_open(n: int, a: int, b: int, x: int) -> bool:
    """x strictly inside the clockwise tour from a to b."""
    if a == b:
        return False
    return (x - a) % n < (b - a) % n and x != a


def cw_closed(n: int, a: int, b: int, x: int) -> bool:
    """x on the closed clockwise tour from a to b."""
    return x == a or x == b or cw_open(n, a, b, x)


def acw_open(n: int, a: int, b: int, x: int) -> bool:
    return cw_open(n, b, a, x)


def acw_closed(n: int, a: int, b: int, x: int) -> bool:
    return cw_closed(n, b, a, x)


# -- chord predicates ---------------------------------------------------------


def crosses(n: int, e1: Edge, e2: Edge) -> bool:
    u1, v1 = e1
    u2, v2 = e2
    return (cw_open(n, u1, v1, u2) and acw_open(n, u1, v1, v2)) or (
        cw_open(n, u1, v1, v2) and acw_open(n, u1, v1, u2)
    )


def semi_crosses(n: int, e1: Edge, e2: Edge) -> bool:
    u1, v1 = e1
    u2, v2 = e2
    return (cw_closed(n, u1, v1, u2) and acw_closed(n, u1, v1, v2)) or (
        cw_closed(n, u1, v1, v2) and acw_closed(n, u1, v1, u2)
    )


def separates(n: int, e1: Edge, e2: Edge, e3: Edge) -> bool:
    u1, v1 = e1
    v2 = e2[1]
    v3 = e3[1]
    return (cw_closed(n, u1, v1, v2) and acw_closed(n, u1, v1, v3)) or (
        cw_closed(n, u1, v1, v3) and acw_closed(n, u1, v1, v2)
    )


def traversable(n: int, seq: Sequence[Edge]) -> bool:
    """Whether an edge sequence is traversable (see module docstring)."""
    if len(seq) < 2:
        return len(seq) == 1
    if not semi_crosses(n, seq[0], seq[1]):
        return False
    for i in range(2, len(seq)):
        ok = False
        for p in range(i):
            for q in range(i):
                if p != q and separates(n, seq[i], seq[p], seq[q]):
                    ok = True
                    break
            if ok:
                break
        if not ok:
            return False
    return True


def chord_gap(n: int, e: Edge) -> int:
    """Vertices strictly inside the designated (shorter) arc of a chord."""
    u, v = e
    d_cw = (v - u) % n
    return min(d_cw, n - d_cw) - 1


# -- construction -------------------------------------------------------------


def build_circle(
    frag: GridFragment,
    rim: Sequence[tuple[int, int]],
    reach_rows: Optional[Callable[[tuple[int, int]], set[tuple[int, int]]]] = None,
) -> CircleGraph:
    """Circle graph of a block from per-rim-vertex reachability rows.

    ``reach_rows`` maps a rim cell to the set of cells reachable from it;
    it defaults to plain BFS over the fragment, and can be swapped for the
    separator-based solver by the pipeline.
    """
    if reach_rows is None:
        reach_rows = lambda cell: fragment_reach_rows(frag, cell)
    n = len(rim)
    rim_index = {cell: i for i, cell in enumerate(rim)}
    edges: set[Edge] = set()
    for i, cell in enumerate(rim):
        for reached in reach_rows(cell):
            j = rim_index.get(reached)
            if j is not None and j != i:
                edges.add((i, j))
    return CircleGraph(n, frozenset(edges))


# -- debug dump ----------------------------------------------------------------


def dump_circle(c: CircleGraph) -> str:
    lines = [f"circle {c.n}"]
    for u, v in sorted(c.edges):
        lines.append(f"c {u} {v}")
    return "\n".join(lines) + "\n"


def parse_circle(text: str) -> CircleGraph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("circle "):
        raise ValueError("missing 'circle <n>' header")
    n = int(lines[0].split()[1])
    edges = set()
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] != "c" or len(parts) != 3:
            raise ValueError(f"bad circle edge line: {ln!r}")
        edges.add((int(parts[1]), int(parts[2])))
    return CircleGraph(n, frozenset(edges))
