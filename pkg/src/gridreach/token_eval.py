"""Token evaluation over labeled graphs with a mandatory-successor function.

A token occupies a vertex at a *level*.  Traversing an edge requires a label
``a -> b`` with the current level at least ``a``; the token's level becomes
``b``.  If the traversed edge has a mandatory successor, the token is bound to
leave over that successor, so its position is really a *(vertex, slot)* pair:
the slot is the binding incoming edge, or the free slot ``None``.

The evaluator keeps the best (largest) achievable level per (vertex, slot)
cell and sweeps all edges until a fixed point.  Levels only ever increase, and
each productive sweep settles at least one label, so the sweep count is capped
by the total number of labels plus a final no-change sweep.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Mapping, Optional

from . import mutations
from .gadget import EdgeKey, GadgetEdge
from .levels import INF, Level, UNREACHED

Vertex = Hashable
Slot = Optional[EdgeKey]
Cell = tuple[Vertex, Slot]


class TokenEvalError(AssertionError):
    """The sweep did not behave as the label structure guarantees."""


def build_kinv(edges: Mapping[EdgeKey, GadgetEdge]) -> dict[EdgeKey, EdgeKey]:
    inv: dict[EdgeKey, EdgeKey] = {}
    for key, e in edges.items():
        if e.ksucc is not None:
            if e.ksucc in inv:
                raise TokenEvalError(f"two edges mandate successor {e.ksucc}")
            inv[e.ksucc] = key
    return inv


def sweep_levels(
    edges: Mapping[EdgeKey, GadgetEdge],
    kinv: Optional[Mapping[EdgeKey, EdgeKey]],
    init: Mapping[Cell, Level],
) -> dict[Cell, Level]:
    """Best achievable level per (vertex, slot) cell from the given seeds.

    Slot keys are the *global* edge keys, so the sweep composes across
    sub-instances: a token bound to a successor edge missing from ``edges``
    keeps its cell, and a later sweep holding that edge resumes it.  Cells
    never reached stay absent (conceptually at the ``unreached`` sentinel).
    """
    if kinv is None:
        kinv = build_kinv(edges)
    ignore_k = mutations.IGNORE_PATH_FUNCTION
    table: dict[Cell, Level] = dict(init)
    order = list(edges.keys())
    total_labels = sum(len(edges[k].labels) for k in order)
    sweeps = 0
    changed = True
    while changed:
        changed = False
        sweeps += 1
        if sweeps > total_labels + 1:
            raise TokenEvalError(
                f"sweep count exceeded label count bound ({total_labels} labels)"
            )
        for key in order:
            e = edges[key]
            src_slot: Slot = None if ignore_k else kinv.get(key)
            have = table.get((e.tail, src_slot), UNREACHED)
            if have is UNREACHED:
                continue
            dst_slot: Slot = None if ignore_k or e.ksucc is None else key
            cell = (e.head, dst_slot)
            best = table.get(cell, UNREACHED)
            for a, b in e.labels:
                if have >= a and b > best:
                    best = b
            if best is not UNREACHED and best != table.get(cell, UNREACHED):
                table[cell] = best
                changed = True
    return table


def token_levels(
    edges: Mapping[EdgeKey, GadgetEdge],
    kinv: Optional[Mapping[EdgeKey, EdgeKey]],
    start: Vertex,
    start_level: Level = INF,
) -> dict[Cell, Level]:
    """Levels reachable by a single free token starting at ``start``."""
    return sweep_levels(edges, kinv, {(start, None): start_level})


def token_reachable(
    edges: Mapping[EdgeKey, GadgetEdge],
    kinv: Optional[Mapping[EdgeKey, EdgeKey]],
    x: Vertex,
    y: Vertex,
) -> bool:
    """Whether a token starting free at ``x`` with level ``inf`` can sit at ``y``."""
    if x == y:
        return True
    table = token_levels(edges, kinv, x)
    return any(cell[0] == y for cell in table)


def token_min_hops(
    edges: Mapping[EdgeKey, GadgetEdge],
    kinv: Optional[Mapping[EdgeKey, EdgeKey]],
    x: Vertex,
    y: Vertex,
    collapse_chains: bool = False,
) -> Optional[int]:
    """Fewest edges of any valid token tour from ``x`` to ``y`` (None if none).

    With ``collapse_chains`` a mandatory-successor continuation costs nothing,
    so a whole subdivided chain counts as one move along its original edge.
    Exhaustive search over (vertex, slot, level) states; intended as a test
    oracle for tour-length guarantees, not for production use.
    """
    if x == y:
        return 0
    if kinv is None:
        kinv = build_kinv(edges)
    out_by_tail: dict[Vertex, list[EdgeKey]] = {}
    for key in edges:
        out_by_tail.setdefault(key[0], []).append(key)
    start = (x, None, INF)
    # 0-1 BFS: chain continuations may cost 0, everything else costs 1
    best = {start: 0}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        v, slot, level = state
        hops = best[state]
        if v == y:
            return hops
        for key in out_by_tail.get(v, ()):
            e = edges[key]
            src_slot = kinv.get(key)
            if slot != src_slot:
                continue
            cost = 0 if (collapse_chains and src_slot is not None) else 1
            dst_slot = key if e.ksucc is not None else None
            for a, b in e.labels:
                if level >= a:
                    nstate = (e.head, dst_slot, b)
                    if nstate not in best or hops + cost < best[nstate]:
                        best[nstate] = hops + cost
                        if cost == 0:
                            queue.appendleft(nstate)
                        else:
                            queue.append(nstate)
    return None
