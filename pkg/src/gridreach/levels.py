"""Exact token levels.

Levels are exact rationals of the form ``i + j / n`` (``i`` an integer stage,
``j`` a tie-break numerator, ``n`` a fixed denominator per transform), plus two
sentinels: ``UNREACHED`` (below every finite level) and ``INF`` (above every
finite level).  All comparisons are exact; floating point is never used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Optional

_KIND_UNREACHED = -1
_KIND_FINITE = 0
_KIND_INF = 1


@total_ordering
@dataclass(frozen=True)
class Level:
    """A token level: an exact rational or one of the two sentinels."""

    kind: int
    value: Fraction = Fraction(0)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def finite(stage: int | Fraction, tie_num: int = 0, tie_den: int = 1) -> "Level":
        return Level(_KIND_FINITE, Fraction(stage) + Fraction(tie_num, tie_den))

    @staticmethod
    def from_fraction(value: Fraction) -> "Level":
        return Level(_KIND_FINITE, Fraction(value))

    # -- predicates --------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind == _KIND_FINITE

    @property
    def is_unreached(self) -> bool:
        return self.kind == _KIND_UNREACHED

    @property
    def is_inf(self) -> bool:
        return self.kind == _KIND_INF

    # -- ordering ----------------------------------------------------------

    def _key(self):
        return (self.kind, self.value if self.kind == _KIND_FINITE else Fraction(0))

    def __lt__(self, other: "Level") -> bool:
        if not isinstance(other, Level):
            return NotImplemented
        if self.kind != other.kind:
            return self.kind < other.kind
        if self.kind != _KIND_FINITE:
            return False
        # integer cross-multiplication beats Fraction.__lt__ dispatch
        a, b = self.value, other.value
        return a.numerator * b.denominator < b.numerator * a.denominator

    def __le__(self, other: "Level") -> bool:
        if not isinstance(other, Level):
            return NotImplemented
        return not other.__lt__(self)

    def __gt__(self, other: "Level") -> bool:
        if not isinstance(other, Level):
            return NotImplemented
        return other.__lt__(self)

    def __ge__(self, other: "Level") -> bool:
        if not isinstance(other, Level):
            return NotImplemented
        return not self.__lt__(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Level):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind != _KIND_FINITE:
            return True
        a, b = self.value, other.value
        return a.numerator == b.numerator and a.denominator == b.denominator

    def __hash__(self) -> int:
        return hash(self._key())

    # -- arithmetic --------------------------------------------------------

    def shifted(self, delta: int | Fraction) -> "Level":
        """Shift a finite level by an exact amount; sentinels are fixed points."""
        if self.kind != _KIND_FINITE:
            return self
        return Level(_KIND_FINITE, self.value + Fraction(delta))

    def minus(self, other: Fraction) -> Fraction:
        if self.kind != _KIND_FINITE:
            raise ValueError("difference is only defined for finite levels")
        return self.value - other

    # -- text --------------------------------------------------------------

    def render(self) -> str:
        if self.kind == _KIND_UNREACHED:
            return "unreached"
        if self.kind == _KIND_INF:
            return "inf"
        v = self.value
        return f"{v.numerator}/{v.denominator}"

    @staticmethod
    def parse(text: str) -> "Level":
        if text == "unreached":
            return UNREACHED
        if text == "inf":
            return INF
        num, _, den = text.partition("/")
        return Level(_KIND_FINITE, Fraction(int(num), int(den or "1")))

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Level({self.render()})"


UNREACHED = Level(_KIND_UNREACHED)
INF = Level(_KIND_INF)
ZERO = Level.finite(0)


def level_max(a: Level, b: Level) -> Level:
    return a if a >= b else b


def level_min(a: Level, b: Level) -> Level:
    return a if a <= b else b


Label = tuple[Level, Level]
"""A label ``in_level -> out_level`` gating the use of a gadget edge."""


def label_render(label: Label) -> str:
    return f"{label[0].render()}->{label[1].render()}"


def label_parse(text: str) -> Label:
    left, _, right = text.partition("->")
    return (Level.parse(left), Level.parse(right))
