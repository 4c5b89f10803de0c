"""SplitMix64: the portable generator behind every seeded experiment.

State is one unsigned 64-bit word.  Each call adds the golden gamma
``0x9E3779B97F4A7C15`` to the state and returns the state passed through
the finalizer::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

all modulo 2**64.  ``below(m)`` is ``next() % m`` (the modulo bias is below
2**-50 for the ranges used here and keeps the draw sequence trivial to port).
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        return self.next() % bound

    def bits(self, count: int) -> tuple[int, ...]:
        return tuple(self.below(2) for _ in range(count))


def derive(seed: int, index: int) -> SplitMix64:
    """Independent generator for sub-task ``index`` of a run seeded with ``seed``."""
    return SplitMix64(SplitMix64((seed + index * GAMMA) & MASK64).next())
