"""Balanced separators and the recursive reachability solvers."""

import math
import random

import pytest

from gridreach.gadget import transform
from gridreach.grid import gen_random
from gridreach.blocks import Block, block_subgraph, rim_cycle
from gridreach.circle import build_circle
from gridreach.ledger import SpaceLedger
from gridreach.levels import INF
from gridreach.separator import (
    SeparatorError,
    connected_components,
    find_separator,
    reach_boolean,
    reach_leveled,
    separator_brute,
    split_instance,
    two_grouping,
    undirected_adjacency,
    validate_separator,
)
from gridreach.token_eval import build_kinv, token_levels


def random_digraph(seed, n_lo=6, n_hi=40, p=0.15):
    rng = random.Random(seed)
    n = rng.randint(n_lo, n_hi)
    edges = set()
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                edges.add((u, v))
    return set(range(n)), edges


def grid_adjacency(seed, side=9, density=0.6):
    g = gen_random(side, side, density, seed)
    vertices = {(x, y) for y in range(side) for x in range(side)}
    keys = [((x, y), (nx, ny)) for (x, y) in vertices for nx, ny in g.out_neighbors(x, y)]
    return undirected_adjacency(vertices, keys)


def test_two_grouping_balances_parts():
    parts = [set(range(i * 10, i * 10 + k)) for i, k in enumerate((5, 3, 3, 2, 1))]
    ga, gb = two_grouping(parts)
    assert ga and gb and not (ga & gb)
    assert len(ga) + len(gb) == 14


def test_find_separator_valid_on_random_grids():
    for seed in range(40):
        adj = grid_adjacency(seed)
        sep = find_separator(adj)
        assert validate_separator(adj, sep) is None


def test_fundamental_cycle_quality_on_full_grids():
    for side in (10, 16, 20):
        g = gen_random(side, side, 1.0, 0)
        vertices = {(x, y) for y in range(side) for x in range(side)}
        keys = [
            ((x, y), (nx, ny))
            for (x, y) in vertices
            for nx, ny in g.out_neighbors(x, y)
        ]
        adj = undirected_adjacency(vertices, keys)
        sep = find_separator(adj, "fundamental-cycle")
        assert validate_separator(adj, sep) is None
        assert len(sep) <= 4 * math.sqrt(len(adj)) + 4


def test_brute_separator_is_minimal_and_valid():
    for seed in range(15):
        vertices, edges = random_digraph(seed, 4, 9, 0.3)
        adj = undirected_adjacency(vertices, list(edges))
        sep = separator_brute(adj)
        assert validate_separator(adj, sep) is None


def test_split_instance_strictly_shrinks():
    for seed in range(30):
        adj = grid_adjacency(seed + 100, side=7)
        sep, ga, gb = split_instance(adj)
        assert ga and gb
        assert not (ga & gb) and not (sep & (ga | gb))
        assert len(ga | sep) < len(adj) and len(gb | sep) < len(adj)


def test_reach_boolean_matches_bfs_closure():
    for seed in range(30):
        vertices, edges = random_digraph(seed + 300)
        out = {}
        for u, v in edges:
            out.setdefault(u, []).append(v)
        src = {0}
        # plain closure
        seen = set(src)
        stack = [0]
        while stack:
            u = stack.pop()
            for v in out.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        ledger = SpaceLedger()
        got = reach_boolean(
            vertices, lambda u: out.get(u, ()), src, vertices, cutoff=9, ledger=ledger
        )
        assert got == seen
        ledger.assert_settled()


def gadget_for_seed(seed):
    rng = random.Random(seed)
    w, h = rng.randint(3, 6), rng.randint(3, 6)
    g = gen_random(w, h, rng.choice((0.4, 0.6, 0.8)), seed)
    rim = rim_cycle(w, h)
    block = Block(0, 0, 0, w, h, rim, {c: i for i, c in enumerate(rim)})
    return transform(build_circle(block_subgraph(g, block), rim), checks=False)


def test_reach_leveled_matches_token_sweep():
    for seed in range(10):
        g = gadget_for_seed(seed + 40)
        kinv = build_kinv(g.edges)
        vertices = set()
        for (u, v) in g.edges:
            vertices.update((u, v))
        for start in list(range(0, g.n_out, 3)):
            if start not in vertices:
                continue
            want = token_levels(g.edges, kinv, start)
            ledger = SpaceLedger()
            got = reach_leveled(
                g.edges,
                kinv,
                vertices,
                {(start, None): INF},
                vertices,
                cutoff=12,
                ledger=ledger,
            )
            assert got == {c: l for c, l in want.items() if c[0] in vertices}
            ledger.assert_settled()


def test_separator_stats_are_recorded():
    adj = grid_adjacency(7, side=10, density=1.0)
    stats = []
    split_instance(adj, "fundamental-cycle", stats)
    (n, s, big) = stats[0]
    assert n == len(adj)
    assert s <= 4 * math.sqrt(n) + 4
    assert 3 * big <= 2 * n


def test_unknown_strategy_rejected():
    adj = grid_adjacency(3)
    with pytest.raises(SeparatorError):
        find_separator(adj, "nonsense")
