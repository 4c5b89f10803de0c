"""Exact distance on the phase space.

``d((S, E), (S', E')) = hamming(E, E') + (9 / n) * sum_{k>=1} |S[k-1] - S'[k-1]| / 10**k``

The strategy series is evaluated in closed form: the difference sequence of
two eventually periodic strategies is itself eventually periodic, so its tail
is a geometric series with a rational sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_DOWN, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

from .dynamics import CellState, ContractError, PhasePoint, Strategy

INFINITY = math.inf


@dataclass(frozen=True)
class ExactDistance:
    integer_part: int
    fractional_part: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.fractional_part < 1:
            raise ContractError(f"fractional part out of [0, 1): {self.fractional_part}")

    @property
    def total(self) -> Fraction:
        return self.integer_part + self.fractional_part

    def to_decimal(self, digits: int = 12) -> str:
        """Decimal rendering truncated to ``digits`` places."""
        with localcontext() as ctx:
            ctx.prec = digits + len(str(self.integer_part)) + 5
            frac = Decimal(self.fractional_part.numerator) / Decimal(self.fractional_part.denominator)
            frac = frac.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_DOWN)
        return f"{Decimal(self.integer_part) + frac:.{digits}f}"

    def to_fraction_string(self) -> str:
        t = self.total
        return f"{t.numerator}/{t.denominator}"

    def __str__(self) -> str:
        return self.to_decimal()


def state_distance(E: CellState, other: CellState) -> int:
    """Number of cells in which the two states differ."""
    if E.n != other.n:
        raise ContractError(f"states of different sizes: {E.n} and {other.n}")
    return sum(a != b for a, b in zip(E.bits, other.bits))


def strategy_distance(S: Strategy, other: Strategy, n: int) -> Fraction:
    if n < 1:
        raise ContractError("n must be positive")
    if max(S.max_cell, other.max_cell) > n:
        raise ContractError(f"strategy entries exceed n = {n}")
    if S.prefix == other.prefix and S.period == other.period:
        return Fraction(0)
    return _strategy_distance(S, other, n)


@lru_cache(maxsize=1 << 16)
def _strategy_distance(S: Strategy, other: Strategy, n: int) -> Fraction:
    if S == other:
        return Fraction(0)
    start, length = S.eventual_shape(other)
    head = sum(abs(S[t] - other[t]) * 10 ** (start - 1 - t) for t in range(start))
    block = sum(abs(S[start + j] - other[start + j]) * 10 ** (length - 1 - j) for j in range(length))
    # head / 10^start + block / (10^start * (10^length - 1))
    series = Fraction(head * (10**length - 1) + block, 10**start * (10**length - 1))
    return Fraction(9, n) * series


def distance(x: PhasePoint, y: PhasePoint) -> ExactDistance:
    if x.n != y.n:
        raise ContractError(f"points live in different spaces: n = {x.n} and n = {y.n}")
    return ExactDistance(state_distance(x.state, y.state), strategy_distance(x.strategy, y.strategy, x.n))


def prefix_agreement(S: Strategy, other: Strategy) -> int | float:
    """Length of the longest common prefix; ``math.inf`` for equal strategies."""
    start, length = S.eventual_shape(other)
    for t in range(start + length):
        if S[t] != other[t]:
            return t
    return INFINITY


def truncated_strategy_distance(S: Strategy, other: Strategy, n: int, terms: int) -> Fraction:
    """Partial sum of the first ``terms`` terms of the series, term by term."""
    return Fraction(9, n) * sum(
        (Fraction(abs(S[k - 1] - other[k - 1]), 10**k) for k in range(1, terms + 1)), Fraction(0)
    )
