"""Balanced separators and the low-space recursive reachability searches.

The solver never materialises a full reachability table.  Instead it
recursively splits the (planar) instance with a small balanced separator,
solves the two sides against the separator until the separator frontier
stops improving, and only then extracts the targets.  Storage per recursion
level is the frontier on the separator, so the working space follows the
separator-size recurrence rather than the instance size.

Separator strategies:

* ``separator_bfs_layer`` — one BFS level whose removal leaves prefix and
  suffix at most two thirds of the graph; always valid, sometimes large.
* ``separator_fundamental_cycle`` — the classic planar construction: two BFS
  levels plus a fundamental cycle of the contracted middle band, giving
  ``O(sqrt(n))`` size on planar graphs (uses ``networkx`` for the embedding).
* ``separator_brute`` — exhaustive minimum balanced separator, a test oracle
  for tiny graphs.
"""

from __future__ import annotations

import math
from typing import Callable, Hashable, Iterable, Mapping, Optional

import networkx as nx
from networkx.algorithms.planar_drawing import triangulate_embedding

from .gadget import EdgeKey, GadgetEdge
from .ledger import (
    NullLedger,
    SpaceLedger,
    words_for_set,
    words_for_table,
)
from .levels import INF, Level, UNREACHED
from .token_eval import Cell, Slot, TokenEvalError, sweep_levels

Vertex = Hashable
Adjacency = dict[Vertex, set[Vertex]]


class SeparatorError(AssertionError):
    """A separator guarantee failed."""


# -- undirected scaffolding -----------------------------------------------------


def undirected_adjacency(
    vertices: Iterable[Vertex], edge_keys: Iterable[EdgeKey]
) -> Adjacency:
    adj: Adjacency = {v: set() for v in vertices}
    for (u, v) in edge_keys:
        if u in adj and v in adj and u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def connected_components(adj: Adjacency) -> list[set[Vertex]]:
    seen: set[Vertex] = set()
    comps: list[set[Vertex]] = []
    for root in adj:
        if root in seen:
            continue
        comp = {root}
        frontier = [root]
        seen.add(root)
        while frontier:
            v = frontier.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    frontier.append(w)
        comps.append(comp)
    return comps


def bfs_levels(adj: Adjacency, root: Vertex) -> list[set[Vertex]]:
    levels = [{root}]
    seen = {root}
    while True:
        nxt = set()
        for v in levels[-1]:
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    nxt.add(w)
        if not nxt:
            return levels
        levels.append(nxt)


# -- grouping -------------------------------------------------------------------


def two_grouping(parts: list[set[Vertex]]) -> tuple[set[Vertex], set[Vertex]]:
    """Split components into two groups, minimising imbalance greedily with an
    exact subset-sum fallback, so each group stays at most two thirds of the
    whole whenever every part does."""
    total = sum(len(p) for p in parts)
    order = sorted(range(len(parts)), key=lambda i: -len(parts[i]))
    ga: set[Vertex] = set()
    gb: set[Vertex] = set()
    for i in order:
        (ga if len(ga) <= len(gb) else gb).update(parts[i])
    if max(len(ga), len(gb)) * 3 <= 2 * total or len(parts) <= 2:
        return ga, gb
    # exact: reachable subset sums as a bitmask, then pick the sum nearest half
    sizes = [len(p) for p in parts]
    reach = 1
    for s in sizes:
        reach |= reach << s
    best = min(
        (s for s in range(total + 1) if reach >> s & 1),
        key=lambda s: abs(2 * s - total),
    )
    # reconstruct one subset hitting the best sum
    remaining = best
    chosen: list[int] = []
    reach_wo = [1] * len(sizes)
    for i in range(1, len(sizes)):
        reach_wo[i] = reach_wo[i - 1] | (reach_wo[i - 1] << sizes[i - 1])
    for i in range(len(sizes) - 1, -1, -1):
        if remaining >= sizes[i] and reach_wo[i] >> (remaining - sizes[i]) & 1:
            chosen.append(i)
            remaining -= sizes[i]
        if remaining == 0:
            break
    if remaining != 0:
        raise SeparatorError("subset reconstruction failed")
    ga = set().union(*(parts[i] for i in chosen)) if chosen else set()
    gb = set().union(*(parts[i] for i in range(len(parts)) if i not in set(chosen)))
    return ga, gb


# -- separator strategies --------------------------------------------------------


def separator_bfs_layer(adj: Adjacency, exact: bool = False) -> set[Vertex]:
    """Smallest BFS level whose removal leaves every remaining part at most
    two thirds of the graph.

    By default a level's balance is judged by its prefix and suffix, which is
    fast but pessimistic (a huge suffix may really be many small components).
    ``exact`` re-checks candidate levels against the true components, which
    matters on star-like graphs."""
    n = len(adj)
    comps = connected_components(adj)
    comps.sort(key=len, reverse=True)
    if not comps or 3 * len(comps[0]) <= 2 * n:
        return set()
    big = comps[0]
    rest = n - len(big)
    root = min(big)
    levels = bfs_levels(adj, root)
    best: Optional[set[Vertex]] = None
    before = 0
    for i, level in enumerate(levels):
        after = len(big) - before - len(level)
        if best is not None and len(level) >= len(best):
            before += len(level)
            continue
        if 3 * max(before, after, rest) <= 2 * n:
            best = level
        elif exact and validate_separator(adj, set(level)) is None:
            best = level
        before += len(level)
    if best is None:
        raise SeparatorError("no single BFS level balances the graph")
    return set(best)


def _cycle_separator_of_component(
    adj: Adjacency, comp: set[Vertex], n_total: int
) -> Optional[set[Vertex]]:
    """Two BFS levels plus a fundamental cycle of the triangulated middle
    band; returns None when the construction finds no acceptable cycle."""
    k = len(comp)
    g = nx.Graph()
    g.add_nodes_from(comp)
    for v in comp:
        for w in adj[v]:
            if w in comp:
                g.add_edge(v, w)
    root = min(comp)
    levels = bfs_levels({v: adj[v] & comp for v in comp}, root)
    sizes = [len(l) for l in levels]
    prefix = [0]
    for s in sizes:
        prefix.append(prefix[-1] + s)
    # median level: the level containing the middle vertex
    l1 = next(i for i in range(len(sizes)) if prefix[i + 1] * 2 >= k)
    kk = prefix[l1 + 1]
    lim0 = 2 * math.isqrt(kk) + 2
    l0 = next(
        (
            i
            for i in range(l1, -1, -1)
            if sizes[i] + 2 * (l1 - i) <= lim0
        ),
        0,
    )
    lim2 = 2 * math.isqrt(k - kk) + 2 if k > kk else 2
    l2 = next(
        (
            i
            for i in range(l1 + 1, len(sizes))
            if sizes[i] + 2 * (i - l1 - 1) <= lim2
        ),
        len(sizes),
    )
    s_levels = set()
    if l0 < len(sizes):
        s_levels |= levels[l0]
    if l2 < len(sizes):
        s_levels |= levels[l2]
    middle = set().union(*levels[l0 + 1 : l2]) if l0 + 1 < l2 else set()
    outside = comp - s_levels - middle
    if 3 * max(len(middle), len(outside)) <= 2 * n_total:
        return s_levels
    # the middle band is too big: cut it with a fundamental cycle of its
    # triangulation, with everything at or before l0 contracted to one root
    band = nx.Graph()
    hub = ("_contracted_root",)
    band.add_node(hub)
    band_nodes = middle | (levels[l0] if l0 < len(sizes) else set())
    inner = set().union(*levels[: l0 + 1]) if l0 < len(sizes) else set()
    for v in band_nodes | inner:
        for w in adj[v]:
            if w not in comp:
                continue
            if l2 < len(sizes) and (w in levels[l2] or v in levels[l2]):
                continue
            a = hub if v in inner or (l0 < len(sizes) and v in levels[l0]) else v
            b = hub if w in inner or (l0 < len(sizes) and w in levels[l0]) else w
            if a == b:
                continue
            band.add_edge(a, b)
    band.add_nodes_from(middle)
    if band.number_of_nodes() <= 2:
        return None
    is_planar, emb = nx.check_planarity(band)
    if not is_planar:
        return None
    if not nx.is_connected(band):
        return None
    tri, _ = triangulate_embedding(emb)
    parents = nx.bfs_tree(tri, hub)
    parent = {w: v for v, w in parents.edges()}
    depth = {hub: 0}
    for v in nx.topological_sort(parents):
        if v != hub:
            depth[v] = depth[parent[v]] + 1
    limit = 4 * math.isqrt(len(comp)) + 4
    tree_edges = set(map(frozenset, parents.edges()))
    for (u, v) in tri.edges():
        if frozenset((u, v)) in tree_edges:
            continue
        # fundamental cycle through u, v
        path_u, path_v = [u], [v]
        a, b = u, v
        while depth.get(a, 0) > depth.get(b, 0):
            a = parent[a]
            path_u.append(a)
        while depth.get(b, 0) > depth.get(a, 0):
            b = parent[b]
            path_v.append(b)
        while a != b:
            a = parent[a]
            b = parent[b]
            path_u.append(a)
            path_v.append(b)
        cycle = {x for x in path_u + path_v if x != hub}
        sep = s_levels | cycle
        if len(sep) > limit:
            continue
        rem = {x: adj[x] - sep for x in comp - sep}
        ok = all(
            3 * len(c) <= 2 * n_total
            for c in connected_components({x: rem[x] & rem.keys() for x in rem})
        )
        if ok:
            return sep
    return None


def separator_fundamental_cycle(adj: Adjacency) -> Optional[set[Vertex]]:
    n = len(adj)
    comps = connected_components(adj)
    comps.sort(key=len, reverse=True)
    if not comps or 3 * len(comps[0]) <= 2 * n:
        return set()
    return _cycle_separator_of_component(adj, comps[0], n)


def separator_brute(adj: Adjacency) -> set[Vertex]:
    """Minimum balanced separator by exhaustive search (test oracle)."""
    n = len(adj)
    if n > 14:
        raise SeparatorError("brute-force separator oracle limited to 14 vertices")
    verts = sorted(adj)
    from itertools import combinations

    for size in range(n + 1):
        for combo in combinations(verts, size):
            s = set(combo)
            rem = {v: adj[v] - s for v in adj if v not in s}
            rem = {v: rem[v] & rem.keys() for v in rem}
            if all(3 * len(c) <= 2 * n for c in connected_components(rem)):
                return s
    raise SeparatorError("unreachable")


STRATEGIES = ("auto", "bfs-layer", "fundamental-cycle", "brute")


def find_separator(adj: Adjacency, strategy: str = "auto") -> set[Vertex]:
    """Balanced separator by the chosen strategy.

    ``auto`` takes the BFS level and upgrades to the planar fundamental-cycle
    construction when the level exceeds ``4 sqrt(n)``; the named strategies
    force one construction (fundamental-cycle falls back to the BFS level on
    graphs the embedding step rejects).
    """
    n = len(adj)
    if strategy == "brute":
        sep = separator_brute(adj)
    elif strategy == "bfs-layer":
        sep = separator_bfs_layer(adj)
    elif strategy == "fundamental-cycle":
        sep = separator_fundamental_cycle(adj)
        if sep is None:
            sep = separator_bfs_layer(adj)
    elif strategy == "auto":
        sep = separator_bfs_layer(adj)
        if len(sep) > 4 * math.isqrt(n) + 4:
            alt = separator_fundamental_cycle(adj)
            if alt is not None and len(alt) < len(sep):
                sep = alt
    else:
        raise SeparatorError(f"unknown separator strategy {strategy!r}")
    problem = validate_separator(adj, sep)
    if problem is not None:
        raise SeparatorError(problem)
    return sep


def _parts_after(adj: Adjacency, sep: set[Vertex]) -> list[set[Vertex]]:
    rem = {v: adj[v] - sep for v in adj if v not in sep}
    rem = {v: rem[v] & rem.keys() for v in rem}
    return connected_components(rem)


def _stall_separator(adj: Adjacency) -> set[Vertex]:
    """Separator search for instances where the default BFS layer leaves a
    single component (no recursion progress).

    Tries BFS levels from several roots, demanding a valid separator whose
    removal leaves at least two components; falls back to the exhaustive
    oracle on tiny instances.
    """
    n = len(adj)
    comps = connected_components(adj)
    comps.sort(key=len, reverse=True)
    big = comps[0]
    roots = [min(big), max(big, key=lambda v: len(adj[v]))]
    levels0 = bfs_levels({v: adj[v] & big for v in big}, roots[0])
    roots.append(min(levels0[-1]))
    best: Optional[set[Vertex]] = None
    for root in dict.fromkeys(roots):
        for level in bfs_levels({v: adj[v] & big for v in big}, root):
            cand = set(level)
            if best is not None and len(cand) >= len(best):
                continue
            if validate_separator(adj, cand) is None and len(_parts_after(adj, cand)) >= 2:
                best = cand
    if best is not None:
        return best
    cyc = separator_fundamental_cycle(adj)
    if (
        cyc
        and validate_separator(adj, cyc) is None
        and len(_parts_after(adj, cyc)) >= 2
    ):
        return cyc
    if n <= 14:
        cand = separator_brute(adj)
        if len(_parts_after(adj, cand)) >= 2:
            return cand
        # the minimum balanced separator may itself leave one part; widen it
        for size in range(len(cand) + 1, n):
            from itertools import combinations

            for combo in combinations(sorted(adj), size):
                s = set(combo)
                if (
                    validate_separator(adj, s) is None
                    and len(_parts_after(adj, s)) >= 2
                ):
                    return s
    raise SeparatorError("no progress-making separator found")


def split_instance(
    adj: Adjacency,
    strategy: str = "auto",
    stats: Optional[list] = None,
) -> tuple[set[Vertex], set[Vertex], set[Vertex]]:
    """Separator plus a two-grouping of the remaining components.

    Guarantees both groups are proper subsets of the vertex set, so both
    recursion sides strictly shrink; if removing the separator leaves a
    single component, that component is split further.  ``stats`` collects a
    ``(n, separator size, larger group size)`` record per call.
    """
    sep = find_separator(adj, strategy)
    parts = _parts_after(adj, sep)
    if len(parts) < 2:
        sep = _stall_separator(adj)
        parts = _parts_after(adj, sep)
    if len(parts) < 2:
        raise SeparatorError("could not split the instance into two parts")
    ga, gb = two_grouping(parts)
    if not ga or not gb:
        raise SeparatorError("degenerate two-grouping")
    if stats is not None:
        stats.append((len(adj), len(sep), max(len(ga), len(gb))))
    return sep, ga, gb


def validate_separator(adj: Adjacency, sep: set[Vertex]) -> Optional[str]:
    n = len(adj)
    rem = {v: adj[v] - sep for v in adj if v not in sep}
    rem = {v: rem[v] & rem.keys() for v in rem}
    for c in connected_components(rem):
        if 3 * len(c) > 2 * n:
            return f"component of size {len(c)} remains after removing {len(sep)}"
    return None


# -- recursive boolean reachability (plain digraphs) ------------------------------


def reach_boolean(
    vertices: set[Vertex],
    out_edges: Callable[[Vertex], Iterable[Vertex]],
    sources: set[Vertex],
    targets: set[Vertex],
    cutoff: int = 64,
    ledger: Optional[SpaceLedger] = None,
    strategy: str = "auto",
    stats: Optional[list] = None,
) -> set[Vertex]:
    """Targets reachable from sources inside the induced subgraph.

    Separator recursion with a BFS base case; per-level storage is the
    boolean frontier on the separator.
    """
    led = ledger or NullLedger()
    sources = sources & vertices
    if not sources:
        return set()
    if len(vertices) <= cutoff:
        seen = set(sources)
        frontier = list(sources)
        while frontier:
            v = frontier.pop()
            for w in out_edges(v):
                if w in vertices and w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return seen & targets
    edge_keys = [
        (v, w) for v in vertices for w in out_edges(v) if w in vertices
    ]
    adj = undirected_adjacency(vertices, edge_keys)
    sep, ga, gb = split_instance(adj, strategy, stats)
    sides = (ga | sep, gb | sep)
    hit: set[Vertex] = sources & sep
    out: set[Vertex] = sources & targets
    # a side is re-solved only while the opposite side keeps improving the
    # separator frontier; each solve reports its own targets as well, so no
    # extra extraction pass is needed
    with led.tracked(words_for_set(sep), "separator"):
        led.alloc(words_for_set(hit), "frontier")
        dirty = [True, True]
        while dirty[0] or dirty[1]:
            for i, side in enumerate(sides):
                if not dirty[i]:
                    continue
                dirty[i] = False
                got = reach_boolean(
                    side,
                    out_edges,
                    (sources | hit) & side,
                    sep | (targets & side),
                    cutoff,
                    led,
                    strategy,
                    stats,
                )
                out |= got & targets
                new = (got & sep) - hit
                if new:
                    led.alloc(words_for_set(new), "frontier")
                    hit |= new
                    dirty[1 - i] = True
        led.free(words_for_set(hit), "frontier")
    return out


def _release_view(edges) -> None:
    """Tell a streamed edge view its last full pass is over, so it can drop
    (and un-charge) its block cache; plain dicts have no such hook."""
    release = getattr(edges, "release", None)
    if release is not None:
        release()


# -- recursive leveled reachability (labeled graphs) -------------------------------


def reach_leveled(
    edges: Mapping[EdgeKey, GadgetEdge],
    kinv: Mapping[EdgeKey, EdgeKey],
    vertices: set[Vertex],
    sources: Mapping[Cell, Level],
    targets: set[Vertex],
    cutoff: int = 64,
    ledger: Optional[SpaceLedger] = None,
    strategy: str = "auto",
    stats: Optional[list] = None,
) -> dict[Cell, Level]:
    """Best levels achievable at target cells inside the induced subgraph.

    The same separator recursion as ``reach_boolean``, but the frontier is a
    (vertex, slot) -> level table and the base case is the label sweep.
    Slot keys are global edge keys, so bound tokens resume across the cut.
    """
    led = ledger or NullLedger()
    sources = {c: l for c, l in sources.items() if c[0] in vertices}
    if not sources:
        return {}
    if len(vertices) <= cutoff:
        sub = {
            k: e for k, e in edges.items() if k[0] in vertices and k[1] in vertices
        }
        _release_view(edges)
        table = sweep_levels(sub, kinv, sources)
        return {c: l for c, l in table.items() if c[0] in targets}
    adj = undirected_adjacency(
        vertices,
        (k for k in edges if k[0] in vertices and k[1] in vertices),
    )
    sep, ga, gb = split_instance(adj, strategy, stats)
    sides = (ga | sep, gb | sep)
    # one pass builds the induced edge dicts and the induced path-function
    # inverses for both sides, so the recursion never re-reads `edges`
    side_edges: tuple[dict, dict] = ({}, {})
    side_kinv: tuple[dict, dict] = ({}, {})
    for k, e in edges.items():
        pred = kinv.get(k)
        for i in (0, 1):
            if k[0] in sides[i] and k[1] in sides[i]:
                side_edges[i][k] = e
                if pred is not None:
                    side_kinv[i][k] = pred
    _release_view(edges)
    frontier: dict[Cell, Level] = {
        c: l for c, l in sources.items() if c[0] in sep
    }
    result: dict[Cell, Level] = {
        c: l for c, l in sources.items() if c[0] in targets
    }
    # a side is re-solved only while the opposite side keeps improving the
    # separator frontier, and every solve reports its own targets too;
    # terminates because the frontier only gains cells or raises levels,
    # and levels come from the finite label set
    with led.tracked(words_for_set(sep), "separator"):
        led.alloc(words_for_table(frontier), "frontier")
        dirty = [True, True]
        while dirty[0] or dirty[1]:
            for i, side in enumerate(sides):
                if not dirty[i]:
                    continue
                dirty[i] = False
                seed = dict(frontier)
                for c, l in sources.items():
                    if c[0] in side and (c not in seed or l > seed[c]):
                        seed[c] = l
                got = reach_leveled(
                    side_edges[i],
                    side_kinv[i],
                    side,
                    seed,
                    sep | (targets & side),
                    cutoff,
                    led,
                    strategy,
                    stats,
                )
                for c, l in got.items():
                    if c[0] in targets and (c not in result or l > result[c]):
                        result[c] = l
                    if c[0] in sep:
                        old = frontier.get(c)
                        if old is None or l > old:
                            if old is None:
                                led.alloc(words_for_table({c: l}), "frontier")
                            frontier[c] = l
                            dirty[1 - i] = True
        led.free(words_for_table(frontier), "frontier")
    return result
