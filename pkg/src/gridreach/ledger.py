"""Word-counting space ledger for the solver's working memory.

The solver's sublinear-space claim is about *working* storage: frontier
tables, level tables, the current block's circle/gadget data, and the
separator stack.  The read-only input graph, the output bit, and transient
solver scratch are not charged.  Structures register their word counts when
they come into existence and release them when dropped; the ledger records
the running total and the peak, per phase and overall.

Conventions (documented, coarse, and consistent across modes): one word per
stored scalar; a frontier entry (vertex, slot, level) costs 3 words; a set
member costs 1 word; a label costs 2 words; an edge record costs 4 words plus
its labels.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator


class LedgerError(AssertionError):
    """Accounting went negative or leaked."""


@dataclass
class SpaceLedger:
    current: int = 0
    peak: int = 0
    phase_name: str = "idle"
    phase_peaks: dict[str, int] = field(default_factory=dict)
    samples: list[tuple[str, int]] = field(default_factory=list)
    sample_limit: int = 0  # 0 = keep no running samples

    def alloc(self, words: int, tag: str = "") -> None:
        if words < 0:
            raise LedgerError(f"negative allocation {words} ({tag})")
        self.current += words
        if self.current > self.peak:
            self.peak = self.current
        if self.current > self.phase_peaks.get(self.phase_name, 0):
            self.phase_peaks[self.phase_name] = self.current
        if self.sample_limit and len(self.samples) < self.sample_limit:
            self.samples.append((tag, self.current))

    def free(self, words: int, tag: str = "") -> None:
        if words < 0:
            raise LedgerError(f"negative free {words} ({tag})")
        self.current -= words
        if self.current < 0:
            raise LedgerError(f"ledger went negative freeing {words} ({tag})")

    @contextmanager
    def tracked(self, words: int, tag: str = "") -> Iterator[None]:
        self.alloc(words, tag)
        try:
            yield
        finally:
            self.free(words, tag)

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        prev = self.phase_name
        self.phase_name = name
        try:
            yield
        finally:
            self.phase_name = prev

    def assert_settled(self) -> None:
        if self.current != 0:
            raise LedgerError(f"{self.current} words still registered at shutdown")


class NullLedger(SpaceLedger):
    """Ledger that accepts charges and records nothing."""

    def alloc(self, words: int, tag: str = "") -> None:  # noqa: D102
        pass

    def free(self, words: int, tag: str = "") -> None:  # noqa: D102
        pass


# -- cost conventions -----------------------------------------------------------

WORDS_PER_FRONTIER_ENTRY = 3
WORDS_PER_SET_MEMBER = 1
WORDS_PER_LABEL = 2
WORDS_PER_EDGE = 4


def words_for_table(table: dict) -> int:
    return WORDS_PER_FRONTIER_ENTRY * len(table)


def words_for_set(members) -> int:
    return WORDS_PER_SET_MEMBER * len(members)


def words_for_edges(edges: dict) -> int:
    return sum(
        WORDS_PER_EDGE + WORDS_PER_LABEL * len(e.labels) for e in edges.values()
    )
