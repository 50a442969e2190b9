"""Word-counting ledger semantics."""

import pytest

from gridreach.ledger import (
    LedgerError,
    NullLedger,
    SpaceLedger,
    words_for_edges,
    words_for_set,
    words_for_table,
)
from gridreach.gadget import GadgetEdge
from gridreach.levels import INF, ZERO


def test_alloc_free_tracks_current_and_peak():
    led = SpaceLedger()
    led.alloc(10)
    led.alloc(5)
    led.free(12)
    assert led.current == 3
    assert led.peak == 15


def test_negative_moves_rejected():
    led = SpaceLedger()
    with pytest.raises(LedgerError):
        led.alloc(-1)
    with pytest.raises(LedgerError):
        led.free(-1)
    led.alloc(4)
    with pytest.raises(LedgerError):
        led.free(5)


def test_tracked_frees_even_on_exception():
    led = SpaceLedger()
    with pytest.raises(RuntimeError):
        with led.tracked(7):
            raise RuntimeError
    assert led.current == 0
    assert led.peak == 7
    led.assert_settled()


def test_assert_settled_flags_leaks():
    led = SpaceLedger()
    led.alloc(1)
    with pytest.raises(LedgerError):
        led.assert_settled()
    led.free(1)
    led.assert_settled()


def test_phase_peaks_are_per_phase():
    led = SpaceLedger()
    with led.phase("build"):
        led.alloc(20)
        led.free(20)
    with led.phase("search"):
        led.alloc(8)
        with led.phase("inner"):
            led.alloc(1)
            led.free(1)
        led.free(8)
    assert led.phase_peaks["build"] == 20
    assert led.phase_peaks["search"] == 8
    assert led.phase_peaks["inner"] == 9
    assert led.peak == 20


def test_null_ledger_records_nothing():
    led = NullLedger()
    led.alloc(100)
    led.free(3)
    assert led.current == 0 and led.peak == 0
    led.assert_settled()


def test_word_conventions():
    assert words_for_set({1, 2, 3}) == 3
    assert words_for_table({("v", None): INF}) == 3
    edges = {
        (0, 1): GadgetEdge(0, 1, frozenset({(ZERO, INF)}), None),
        (1, 2): GadgetEdge(1, 2, frozenset({(ZERO, INF), (INF, INF)}), (0, 1)),
    }
    assert words_for_edges(edges) == (4 + 2) + (4 + 4)
