"""Circle graphs: chord relations and rim-reachability construction."""

from hypothesis import given, settings
from hypothesis import strategies as st

from gridreach.blocks import Block, block_subgraph, fragment_reach_rows, rim_cycle
from gridreach.circle import (
    build_circle,
    chord_gap,
    crosses,
    cw_open,
    dump_circle,
    parse_circle,
    semi_crosses,
    separates,
    traversable,
)
from gridreach.grid import gen_random


def test_cw_open_basics():
    # on an octagon, walking clockwise from 1 to 5 passes 2, 3, 4 only
    assert all(cw_open(8, 1, 5, x) for x in (2, 3, 4))
    assert not any(cw_open(8, 1, 5, x) for x in (1, 5, 6, 7, 0))
    # wrap-around arc
    assert all(cw_open(8, 6, 2, x) for x in (7, 0, 1))


def test_crossing_relations_hand_cases():
    n = 8
    assert crosses(n, (0, 4), (2, 6))
    assert crosses(n, (2, 6), (0, 4))
    assert not crosses(n, (0, 4), (1, 3))
    # semi-crossing: shared endpoint patterns per the open/closed tour rules
    assert semi_crosses(n, (0, 4), (4, 1))
    assert not semi_crosses(n, (0, 4), (5, 7))


def test_separates_hand_case():
    n = 12
    # chord (3, 9) separates endpoints of (1, 5) and (7, 11)
    assert separates(n, (1, 5), (7, 11), (3, 9)) or separates(
        n, (7, 11), (1, 5), (3, 9)
    )


def test_traversable_pair_and_chain():
    n = 8
    assert traversable(n, [(0, 4), (4, 1)])
    assert not traversable(n, [(0, 2), (4, 6)])


@given(st.integers(4, 16), st.integers(0, 3), st.integers(0, 15))
@settings(max_examples=80, deadline=None)
def test_chord_gap_range(n, da, b):
    a = b % n
    c = (a + 2 + da) % n
    if a == c:
        return
    g = chord_gap(n, (a, c))
    assert 0 <= g <= n - 2


@given(st.integers(3, 7), st.integers(3, 7), st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_build_circle_matches_brute_rim_reachability(w, h, seed):
    g = gen_random(w, h, 0.55, seed)
    rim = rim_cycle(w, h)
    block = Block(0, 0, 0, w, h, rim, {c: i for i, c in enumerate(rim)})
    frag = block_subgraph(g, block)
    circle = build_circle(frag, rim)
    for i, cell in enumerate(rim):
        row = fragment_reach_rows(frag, cell)
        for j, other in enumerate(rim):
            if i != j:
                assert circle.has(i, j) == (other in row)


def test_dump_parse_roundtrip():
    g = gen_random(5, 5, 0.6, 11)
    rim = rim_cycle(5, 5)
    block = Block(0, 0, 0, 5, 5, rim, {c: i for i, c in enumerate(rim)})
    circle = build_circle(block_subgraph(g, block), rim)
    assert parse_circle(dump_circle(circle)) == circle
