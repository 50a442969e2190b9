"""Portable seedable 64-bit pseudo-random generator.

SplitMix64, chosen so instance generation is reproducible across languages.
Constants (all arithmetic mod 2**64):

* state update: ``state += 0x9E3779B97F4A7C15``
* mix 1:        ``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``
* mix 2:        ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``
* output:       ``z ^ (z >> 31)``

A seed of ``s`` means the first output is produced from state ``s``.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit generator with a tiny, documented state machine."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def next_below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = _MASK + 1 - ((_MASK + 1) % bound)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % bound

    def next_unit(self) -> float:
        """Uniform float in ``[0, 1)`` with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def chance(self, probability: float) -> bool:
        return self.next_unit() < probability
