"""Label-sweep token evaluation semantics."""

import pytest

from gridreach import mutations
from gridreach.gadget import GadgetEdge
from gridreach.levels import INF, ZERO, Level
from gridreach.token_eval import (
    TokenEvalError,
    build_kinv,
    sweep_levels,
    token_levels,
    token_min_hops,
    token_reachable,
)


def edge(t, h, labels, ksucc=None):
    return GadgetEdge(t, h, frozenset(labels), ksucc)


def chain_graph():
    """0 -> 1 starts a mandatory chain to 2; 1 -> 3 is a separate free edge."""
    return {
        (0, 1): edge(0, 1, {(ZERO, INF)}, ksucc=(1, 2)),
        (1, 2): edge(1, 2, {(ZERO, INF)}),
        (1, 3): edge(1, 3, {(ZERO, INF)}),
    }


def test_path_function_respected():
    edges = chain_graph()
    kinv = build_kinv(edges)
    assert token_reachable(edges, kinv, 0, 2) is True
    # a token bound to the (0,1)->(1,2) chain must not exit at vertex 1
    assert token_reachable(edges, kinv, 0, 3) is False


def test_ignore_path_function_mutation_breaks_equivalence():
    edges = chain_graph()
    kinv = build_kinv(edges)
    with mutations.enabled("IGNORE_PATH_FUNCTION"):
        assert token_reachable(edges, kinv, 0, 3) is True


def test_level_gating():
    lvl3 = Level.finite(3)
    edges = {
        (0, 1): edge(0, 1, {(ZERO, ZERO)}),
        (1, 2): edge(1, 2, {(lvl3, INF)}),
        (1, 3): edge(1, 3, {(ZERO, lvl3)}),
        (3, 1): edge(3, 1, {(ZERO, lvl3)}),
    }
    kinv = build_kinv(edges)
    table = token_levels(edges, kinv, 0)
    # after 0 -> 1 the token's level is 0, too low for the (3 -> inf) label;
    # the detour through 3 raises it to 3, unlocking vertex 2
    assert table[(1, None)] == lvl3
    assert table[(2, None)] == INF
    assert token_reachable(edges, kinv, 0, 2)


def test_sweep_count_is_bounded_by_label_count():
    # a relay chain that forces one new binding per sweep still terminates
    n = 6
    edges = {}
    for i in range(n):
        edges[(i, i + 1)] = edge(i, i + 1, {(ZERO, INF)})
    kinv = build_kinv(edges)
    table = sweep_levels(edges, kinv, {(0, None): INF})
    assert (n, None) in table


def test_kinv_rejects_shared_successor():
    edges = {
        (0, 1): edge(0, 1, {(ZERO, INF)}, ksucc=(1, 2)),
        (3, 1): edge(3, 1, {(ZERO, INF)}, ksucc=(1, 2)),
        (1, 2): edge(1, 2, {(ZERO, INF)}),
    }
    with pytest.raises(TokenEvalError):
        build_kinv(edges)


def test_min_hops_counts_and_collapses():
    edges = chain_graph()
    kinv = build_kinv(edges)
    assert token_min_hops(edges, kinv, 0, 2) == 2
    assert token_min_hops(edges, kinv, 0, 2, collapse_chains=True) == 1
    assert token_min_hops(edges, kinv, 0, 3) is None
    assert token_min_hops(edges, kinv, 0, 0) == 0
