"""Block decomposition: partition, rims, and the closed-form rim position."""

from hypothesis import given, settings
from hypothesis import strategies as st

from gridreach.blocks import (
    block_subgraph,
    decompose,
    default_target_side,
    make_block,
    rim_cycle,
    rim_position,
)
from gridreach.grid import gen_random


@given(st.integers(1, 40), st.integers(1, 40))
@settings(max_examples=120, deadline=None)
def test_rim_position_matches_cycle_index(w, h):
    cycle = rim_cycle(w, h)
    assert len(set(cycle)) == len(cycle)
    for i, (lx, ly) in enumerate(cycle):
        assert rim_position(w, h, lx, ly) == i


@given(st.integers(2, 30), st.integers(2, 30), st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_decompose_partitions_cells(w, h, seed):
    g = gen_random(w, h, 0.5, seed)
    bset = decompose(g)
    seen = {}
    for y in range(h):
        for x in range(w):
            bi = bset.block_of(x, y)
            x0, y0, bw, bh = bset.block_bounds(bi)
            assert x0 <= x < x0 + bw and y0 <= y < y0 + bh
            seen[(x, y)] = bi
    # block areas sum to the grid area
    total = sum(
        bset.block_bounds(bi)[2] * bset.block_bounds(bi)[3]
        for bi in range(bset.n_blocks)
    )
    assert total == w * h


@given(st.integers(2, 30), st.integers(2, 30), st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_designated_vertices_land_on_rims(w, h, seed):
    g = gen_random(w, h, 0.5, seed)
    bset = decompose(g)
    for v in (g.s, g.t):
        bi = bset.block_of(v.x, v.y)
        x0, y0, bw, bh = bset.block_bounds(bi)
        lx, ly = v.x - x0, v.y - y0
        assert lx in (0, bw - 1) or ly in (0, bh - 1)


def test_default_target_side_scales_with_cube_root():
    # half the (rounded-up) cube root of the cell count, floored at 3
    for side, want in ((3, 3), (8, 3), (27, 4), (64, 8), (125, 12)):
        g = gen_random(side, side, 0.5, 1)
        assert default_target_side(g) == want


def test_block_subgraph_keeps_internal_edges_only():
    g = gen_random(9, 9, 0.7, 5)
    bset = decompose(g)
    for bi in range(bset.n_blocks):
        block = make_block(bset, bi)
        frag = block_subgraph(g, block)
        for ly in range(frag.height):
            for lx in range(frag.width):
                for nx, ny in frag.out_neighbors(lx, ly):
                    assert 0 <= nx < frag.width and 0 <= ny < frag.height
                    gx, gy = block.to_global(lx, ly)
                    assert g.has_edge(gx, gy, *block.to_global(nx, ny))
