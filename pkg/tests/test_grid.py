"""Grid parsing, generation, and the BFS reference oracle."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridreach.grid import (
    DIR_DELTAS,
    GridFormatError,
    GridGraph,
    VertexId,
    bfs_reachable,
    bfs_reachable_set,
    gen_random,
    parse_grid,
    write_grid,
)


def grids(max_side=9):
    """Hypothesis strategy for random legal grids."""

    @st.composite
    def build(draw):
        w = draw(st.integers(1, max_side))
        h = draw(st.integers(1, max_side))
        masks = []
        for y in range(h):
            for x in range(w):
                m = 0
                for d in range(4):
                    dx, dy = DIR_DELTAS[d]
                    if 0 <= x + dx < w and 0 <= y + dy < h and draw(st.booleans()):
                        m |= 1 << d
                masks.append(m)
        s = VertexId(draw(st.integers(0, w - 1)), draw(st.integers(0, h - 1)))
        t = VertexId(draw(st.integers(0, w - 1)), draw(st.integers(0, h - 1)))
        return GridGraph(w, h, tuple(masks), s, t)

    return build()


@given(grids())
@settings(max_examples=80, deadline=None)
def test_write_parse_roundtrip(g):
    assert parse_grid(write_grid(g)) == g


def test_parse_rejects_out_of_bounds_edge():
    text = write_grid(gen_random(3, 3, 0.5, 1))
    with pytest.raises(GridFormatError):
        parse_grid(text.replace("grid 3 3", "grid 2 2"))


def test_gen_random_deterministic():
    assert gen_random(7, 5, 0.4, 99) == gen_random(7, 5, 0.4, 99)
    assert gen_random(7, 5, 0.4, 99) != gen_random(7, 5, 0.4, 100)


def test_gen_random_density_extremes():
    empty = gen_random(5, 5, 0.0, 1)
    full = gen_random(5, 5, 1.0, 1)
    assert all(m == 0 for m in empty.out_mask)
    assert sum(bin(m).count("1") for m in full.out_mask) == 2 * (2 * 5 * 4)


@given(grids(max_side=5))
@settings(max_examples=60, deadline=None)
def test_bfs_reachable_set_is_transitive_closure_row(g):
    # the BFS row must be closed under out-edges
    row = bfs_reachable_set(g, g.s)
    for (x, y) in row | {(g.s.x, g.s.y)}:
        for nx, ny in g.out_neighbors(x, y):
            assert (nx, ny) in row


def test_bfs_reachable_matches_designated_pair():
    g = gen_random(6, 6, 0.5, 3)
    assert bfs_reachable(g) == (
        (g.t.x, g.t.y) in bfs_reachable_set(g, g.s) or g.s == g.t
    )
