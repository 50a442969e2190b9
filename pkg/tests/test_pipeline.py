"""End-to-end solver: correctness against the oracle and view semantics."""

import dataclasses

import pytest

from gridreach.blocks import decompose
from gridreach.grid import VertexId, bfs_reachable, bfs_reachable_set, gen_random
from gridreach.ledger import SpaceLedger
from gridreach.pipeline import (
    PipelineError,
    SolveConfig,
    StreamedEdges,
    StreamedKinv,
    _rim_cell,
    iter_seam_keys,
    solve,
    solve_all_pairs,
)
from gridreach.blocks import rim_position


def random_case(seed):
    import random

    rng = random.Random(seed)
    w, h = rng.randint(6, 12), rng.randint(6, 12)
    return gen_random(w, h, rng.choice((0.3, 0.5, 0.7, 0.9)), seed)


@pytest.mark.parametrize("mode", ["streamed", "materialized"])
def test_solve_matches_oracle(mode):
    for seed in range(20):
        g = random_case(seed)
        report = solve(g, SolveConfig(mode=mode))
        assert report.reachable == bfs_reachable(g), f"seed {seed}"
        assert report.peak_words > 0
        assert report.n_cells == g.width * g.height


def test_solve_alternate_strategies_and_inner():
    for seed in range(6):
        g = random_case(seed + 50)
        want = bfs_reachable(g)
        for cfg in (
            SolveConfig(separator="fundamental-cycle"),
            SolveConfig(separator="bfs-layer"),
            SolveConfig(inner="separator"),
            SolveConfig(mode="materialized", separator="fundamental-cycle"),
        ):
            assert solve(g, cfg).reachable == want, (seed, cfg)


def test_source_equals_target():
    g = gen_random(5, 5, 0.0, 1)
    g = dataclasses.replace(g, s=g.t)
    assert solve(g).reachable is True


def test_streamed_peak_below_materialized():
    g = gen_random(16, 16, 0.6, 3)
    streamed = solve(g, SolveConfig(mode="streamed"))
    materialized = solve(g, SolveConfig(mode="materialized"))
    assert streamed.reachable == materialized.reachable
    assert streamed.peak_words < materialized.peak_words


def test_bad_config_rejected():
    g = gen_random(4, 4, 0.5, 0)
    with pytest.raises(PipelineError):
        solve(g, SolveConfig(mode="telepathy"))
    with pytest.raises(PipelineError):
        solve(g, SolveConfig(inner="telepathy"))


def test_solve_all_pairs_matches_oracle():
    for seed in range(8):
        g = gen_random(4, 4 + (seed % 3) * 2, 0.5 + 0.1 * (seed % 4), seed)
        pairs = solve_all_pairs(g)
        cells = [(x, y) for y in range(g.height) for x in range(g.width)]
        for sc in cells:
            want = bfs_reachable_set(g, VertexId(*sc))
            got = {tc for (a, tc) in pairs if a == sc}
            assert got == want, (seed, sc)


def test_rim_cell_inverts_rim_position():
    for w, h in ((1, 1), (1, 5), (5, 1), (2, 3), (4, 4), (7, 3)):
        from gridreach.blocks import rim_cycle

        for pos, cell in enumerate(rim_cycle(w, h)):
            assert rim_position(w, h, *cell) == pos
            assert _rim_cell(w, h, pos) == cell
        with pytest.raises(IndexError):
            _rim_cell(w, h, len(rim_cycle(w, h)))


def test_streamed_view_is_a_consistent_mapping():
    g = gen_random(9, 9, 0.7, 11)
    bset = decompose(g)
    ledger = SpaceLedger()
    view = StreamedEdges(g, bset, ledger)
    snapshot = dict(view.items())
    assert len(view) == len(snapshot)
    for key, edge in list(snapshot.items())[:200]:
        assert view[key] == edge
    assert set(iter_seam_keys(g, bset)) <= set(snapshot)
    fake = ((0, 0), (bset.n_blocks - 1, 0))
    if fake not in snapshot:
        with pytest.raises(KeyError):
            view[fake]
    view.drop_cache()
    ledger.assert_settled()


def test_streamed_kinv_is_block_local():
    g = gen_random(8, 8, 0.8, 5)
    bset = decompose(g)
    ledger = SpaceLedger()
    view = StreamedEdges(g, bset, ledger)
    kinv = StreamedKinv(view)
    seam = next(iter(iter_seam_keys(g, bset)), None)
    if seam is not None:
        assert kinv.get(seam) is None
    found = 0
    for key, edge in view.items():
        if edge.ksucc is not None:
            assert kinv.get(edge.ksucc) == key
            found += 1
            if found >= 20:
                break
    view.drop_cache()
    ledger.assert_settled()


def test_report_has_separator_stats():
    g = gen_random(14, 14, 1.0, 2)
    report = solve(g, SolveConfig(separator="fundamental-cycle"))
    assert report.sep_stats
    for n, s, big in report.sep_stats:
        assert s <= 4 * n**0.5 + 4
        assert 3 * big <= 2 * n
