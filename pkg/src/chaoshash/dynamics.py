"""Chaotic iterations on a finite network of boolean cells.

A point of the phase space is a pair ``(strategy, state)``.  One step of
``G_f`` updates the single cell named by the head of the strategy with the
corresponding component of ``f(state)`` and shifts the strategy by one.

Cells are numbered from 1 to ``n`` throughout this module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable, Sequence


_BITS = frozenset((0, 1))


class ContractError(ValueError):
    """Raised when an operation is called outside its documented domain."""


def _as_bits(bits: Iterable[int]) -> tuple[int, ...]:
    out = tuple(map(int, bits))
    if not _BITS.issuperset(out):
        raise ContractError(f"cell values must be 0 or 1, got {out!r}")
    return out


@dataclass(frozen=True)
class CellState:
    """Boolean state of ``n`` cells; ``bits[0]`` is cell 1."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", _as_bits(self.bits))
        if not self.bits:
            raise ContractError("a state needs at least one cell")

    @classmethod
    def from_string(cls, text: str) -> "CellState":
        if not text or set(text) - {"0", "1"}:
            raise ContractError(f"not a bit literal: {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def zeros(cls, n: int) -> "CellState":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, cell: int) -> int:
        """Value of ``cell`` (1-based)."""
        return self.bits[cell - 1]

    def __xor__(self, other: "CellState") -> "CellState":
        if other.n != self.n:
            raise ContractError("states of different sizes")
        return CellState(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def to_int(self) -> int:
        """Big-endian integer with cell 1 as the most significant bit."""
        return int(self.to_string(), 2)

    def to_string(self) -> str:
        return "".join(map(str, self.bits))

    def __str__(self) -> str:
        return self.to_string()


def _primitive_root(block: tuple[int, ...]) -> tuple[int, ...]:
    size = len(block)
    for d in range(1, size + 1):
        if size % d == 0 and block[:d] * (size // d) == block:
            return block[:d]
    return block


_LITERAL = re.compile(r"^\s*(?P<head>\d+(?:\s*,\s*\d+)*)?\s*(?:\(\s*(?P<period>\d+(?:\s*,\s*\d+)*)\s*\))?\s*$")


@dataclass(frozen=True, eq=False)
class Strategy:
    """Eventually periodic sequence of cell indices: ``prefix`` then ``period`` forever.

    Two strategies compare equal when they denote the same infinite sequence,
    whatever their representation.
    """

    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = (1,)
    _normal: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        prefix = tuple(map(int, self.prefix))
        period = tuple(map(int, self.period))
        if not period:
            raise ContractError("the repeating block of a strategy cannot be empty")
        if min(period) < 1 or (prefix and min(prefix) < 1):
            raise ContractError("strategy entries are cell indices and start at 1")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def periodic(cls, block: Sequence[int]) -> "Strategy":
        return cls((), tuple(block))

    @classmethod
    def parse(cls, literal: str) -> "Strategy":
        """Read ``"1,2(2,1)"`` (prefix then repeating block) or ``"1,2"`` (purely periodic)."""
        match = _LITERAL.match(literal)
        if match is None or (match["head"] is None and match["period"] is None):
            raise ContractError(f"malformed strategy literal: {literal!r}")
        head = tuple(int(v) for v in match["head"].split(",")) if match["head"] else ()
        if match["period"] is None:
            return cls((), head)
        return cls(head, tuple(int(v) for v in match["period"].split(",")))

    def __str__(self) -> str:
        period = ",".join(map(str, self.period))
        if not self.prefix:
            return period
        return ",".join(map(str, self.prefix)) + f"({period})"

    @property
    def max_cell(self) -> int:
        return max(self.prefix + self.period)

    def __getitem__(self, t: int) -> int:
        if t < 0:
            raise IndexError("strategies are indexed from 0")
        if t < len(self.prefix):
            return self.prefix[t]
        return self.period[(t - len(self.prefix)) % len(self.period)]

    def head(self) -> int:
        """The initial function: first term of the sequence."""
        return self[0]

    def take(self, count: int) -> tuple[int, ...]:
        return tuple(self[t] for t in range(count))

    def shift(self, count: int = 1) -> "Strategy":
        """Drop the first ``count`` terms."""
        if count <= len(self.prefix):
            return Strategy(self.prefix[count:], self.period)
        r = (count - len(self.prefix)) % len(self.period)
        return Strategy((), self.period[r:] + self.period[:r])

    def then(self, terms: Sequence[int]) -> "Strategy":
        """Strategy reading ``terms`` first and then this one."""
        return Strategy(tuple(terms) + self.prefix, self.period)

    def normalize(self) -> "Strategy":
        """Shortest representation: primitive period, prefix with no tail absorbable into it."""
        prefix, period = self._normal or self._compute_normal()
        return Strategy(prefix, period)

    def _compute_normal(self) -> tuple:
        period = _primitive_root(self.period)
        prefix = list(self.prefix)
        while prefix and prefix[-1] == period[-1]:
            prefix.pop()
            period = period[-1:] + period[:-1]
        normal = (tuple(prefix), period)
        object.__setattr__(self, "_normal", normal)
        return normal

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Strategy):
            return NotImplemented
        if self.prefix == other.prefix and self.period == other.period:
            return True
        return (self._normal or self._compute_normal()) == (other._normal or other._compute_normal())

    def __hash__(self) -> int:
        return hash(self._normal or self._compute_normal())

    def eventual_shape(self, other: "Strategy") -> tuple[int, int]:
        """``(start, length)`` after which the pair ``(self, other)`` repeats jointly."""
        start = max(len(self.prefix), len(other.prefix))
        a, b = len(self.period), len(other.period)
        return start, a * b // gcd(a, b)


@dataclass(frozen=True)
class PhasePoint:
    strategy: Strategy
    state: CellState

    def __post_init__(self) -> None:
        if self.strategy.max_cell > self.state.n:
            raise ContractError(
                f"strategy names cell {self.strategy.max_cell} but the state has {self.state.n} cells"
            )

    @property
    def n(self) -> int:
        return self.state.n


@dataclass(frozen=True)
class IterationFunction:
    """A map ``B^n -> B^n`` used to update the selected cell."""

    n: int
    map: Callable[[CellState], CellState]
    name: str = "f"

    def __call__(self, state: CellState) -> CellState:
        if state.n != self.n:
            raise ContractError(f"{self.name} acts on {self.n} cells, got {state.n}")
        image = self.map(state)
        if image.n != self.n:
            raise ContractError(f"{self.name} changed the number of cells")
        return image

    @property
    def is_negation(self) -> bool:
        return self.map is negate_all


def negate_all(state: CellState) -> CellState:
    """Vectorial logical negation: complement every cell."""
    return CellState(tuple(1 - b for b in state.bits))


def _identity(state: CellState) -> CellState:
    return state


def f0(n: int) -> IterationFunction:
    return IterationFunction(n, negate_all, "f0")


def identity(n: int) -> IterationFunction:
    return IterationFunction(n, _identity, "identity")


def step_Ff(f: IterationFunction, k: int, state: CellState) -> CellState:
    """Replace cell ``k`` of ``state`` by component ``k`` of ``f(state)``."""
    if not 1 <= k <= state.n:
        raise ContractError(f"cell index {k} outside [1, {state.n}]")
    bits = list(state.bits)
    if f.is_negation:
        # only one component of f0 is needed
        bits[k - 1] ^= 1
    else:
        bits[k - 1] = f(state)[k]
    return CellState(tuple(bits))


def step_Gf(f: IterationFunction, point: PhasePoint) -> PhasePoint:
    S = point.strategy
    return PhasePoint(S.shift(), step_Ff(f, S.head(), point.state))


def orbit(f: IterationFunction, point: PhasePoint, steps: int) -> list[PhasePoint]:
    """``[x, G_f(x), ..., G_f^steps(x)]``."""
    if steps < 0:
        raise ContractError("steps must be non-negative")
    points = [point]
    for _ in range(steps):
        points.append(step_Gf(f, points[-1]))
    return points


def iterate(f: IterationFunction, point: PhasePoint, steps: int) -> PhasePoint:
    """``G_f^steps(point)`` without keeping the intermediate points."""
    if steps < 0:
        raise ContractError("steps must be non-negative")
    for _ in range(steps):
        point = step_Gf(f, point)
    return point


def parity_mask(strategy: Strategy, steps: int, n: int) -> CellState:
    """Cells selected an odd number of times among the first ``steps`` terms."""
    if steps < 1:
        raise ContractError("steps must be at least 1")
    mask = [0] * n
    for t in range(steps):
        cell = strategy[t]
        if cell > n:
            raise ContractError(f"strategy names cell {cell} but n = {n}")
        mask[cell - 1] ^= 1
    return CellState(tuple(mask))
