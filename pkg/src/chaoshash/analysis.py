"""Executable checks of the chaotic behaviour of ``G_f``.

Each construction returns the points it builds and verifies its own claim by
running the orbits; a failed verification raises ``PropertyViolation``.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Iterator

from . import pipeline
from .dynamics import (
    CellState,
    ContractError,
    IterationFunction,
    PhasePoint,
    Strategy,
    f0,
    iterate,
    orbit,
    parity_mask,
    step_Gf,
)
from .metric import distance, prefix_agreement, state_distance
from .rng import MASK64, SplitMix64, derive

EXPANSIVITY_BUDGET = 10**7


class PropertyViolation(AssertionError):
    """A constructed witness failed its own orbit verification."""


class BudgetExceeded(ValueError):
    def __init__(self, pairs: int, budget: int = EXPANSIVITY_BUDGET) -> None:
        super().__init__(f"{pairs} pairs requested, budget is {budget}")
        self.pairs = pairs


def digits_for(bound: Fraction) -> int:
    """Smallest ``k >= 1`` with ``10**-k < bound``."""
    bound = Fraction(bound)
    if bound <= 0:
        raise ContractError("the bound must be positive")
    k = 1
    while Fraction(1, 10**k) >= bound:
        k += 1
    return k


def _point_json(p: PhasePoint) -> dict[str, Any]:
    return {"strategy": str(p.strategy), "state": p.state.to_string()}


def _frac_json(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# -- continuity ---------------------------------------------------------------


def continuity_prefix_check(f: IterationFunction, x: PhasePoint, y: PhasePoint, m: int) -> bool:
    """Equal states and ``m`` agreeing strategy terms give images with equal
    states and at least ``m - 1`` agreeing terms."""
    if m < 1:
        raise ContractError("m must be positive")
    if x.n != y.n or state_distance(x.state, y.state) != 0:
        raise ContractError("continuity check needs two points with the same state")
    if prefix_agreement(x.strategy, y.strategy) < m:
        raise ContractError(f"strategies agree on fewer than {m} terms")
    gx, gy = step_Gf(f, x), step_Gf(f, y)
    return gx.state == gy.state and prefix_agreement(gx.strategy, gy.strategy) >= m - 1


# -- regularity ---------------------------------------------------------------


def periodic_point_near(x: PhasePoint, epsilon: Fraction) -> PhasePoint:
    """Periodic point of ``G_f0`` within ``epsilon`` of ``x``.

    Keeps the state and repeats the block ``B + B`` where ``B`` holds the first
    ``k`` strategy terms, ``10**-k < epsilon``: every cell is flipped an even
    number of times per period, so ``G^(2k)`` returns to the start.
    """
    k = digits_for(epsilon)
    block = x.strategy.take(k)
    p = PhasePoint(Strategy.periodic(block + block), x.state)
    if not distance(x, p).total < epsilon:
        raise PropertyViolation(f"periodic point is not within {epsilon}")
    if iterate(f0(x.n), p, 2 * k) != p:
        raise PropertyViolation("constructed point does not return after 2k steps")
    return p


# -- transitivity -------------------------------------------------------------


def transit_point(a: PhasePoint, b: PhasePoint, n0: int = 6) -> tuple[PhasePoint, int]:
    """Point near ``a`` whose ``G_f0`` orbit lands exactly on ``b``.

    Returns ``(z, steps)`` with ``G_f0^steps(z) == b``.
    """
    if a.n != b.n:
        raise ContractError("points live in different spaces")
    if n0 < 0:
        raise ContractError("n0 must be non-negative")
    drifted = iterate(f0(a.n), a, n0).state
    corrections = [cell for cell in range(1, a.n + 1) if drifted[cell] != b.state[cell]]
    z = PhasePoint(b.strategy.then(a.strategy.take(n0) + tuple(corrections)), a.state)
    steps = n0 + len(corrections)
    if iterate(f0(a.n), z, steps) != b:
        raise PropertyViolation("transit point missed its target")
    return z, steps


# -- sensitivity --------------------------------------------------------------


@dataclass(frozen=True)
class SensitivityReport:
    n: int
    delta: Fraction
    point: PhasePoint
    witness: PhasePoint
    separation_step: int
    achieved_separation: int

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "delta": _frac_json(self.delta),
            "point": _point_json(self.point),
            "witness": _point_json(self.witness),
            "separation_step": self.separation_step,
            "achieved_separation": self.achieved_separation,
        }


def sensitivity_witness(x: PhasePoint, delta: Fraction, horizon_pad: int = 0) -> SensitivityReport:
    """Point within ``delta`` of ``x`` whose ``G_f0`` orbit separates from x's in every cell.

    The witness copies the first ``k`` strategy terms of ``x`` and then, over a
    window of ``L = n + horizon_pad`` steps, flips each cell with the parity
    opposite to the flips ``x`` makes in the same window; spare steps are
    double flips of cell 1.  Both orbits flip one cell per step, so their
    states always differ in an even number of cells: for odd ``n`` the best
    reachable separation is ``n - 1`` and the last cell is left matching.
    """
    n = x.n
    window = n + horizon_pad
    if window < n:
        raise ContractError(f"window of {window} steps cannot separate {n} cells")
    k = digits_for(delta)
    x_parity = parity_mask(x.strategy.shift(k), window, n)
    flips = [cell for cell in range(1, n + 1) if not x_parity[cell]]
    if (window - len(flips)) % 2:
        # odd n: give up on cell n
        if n in flips:
            flips.remove(n)
        else:
            flips.append(n)
    flips += [1] * (window - len(flips))
    y = PhasePoint(Strategy(x.strategy.take(k) + tuple(flips), (1,)), x.state)

    if not distance(x, y).total < delta:
        raise PropertyViolation(f"witness is not within {delta}")
    step = k + window
    achieved = state_distance(iterate(f0(n), x, step).state, iterate(f0(n), y, step).state)
    if achieved != n - n % 2:
        raise PropertyViolation(f"witness separated {achieved} of {n} cells")
    return SensitivityReport(n, Fraction(delta), x, y, step, achieved)


# -- expansivity --------------------------------------------------------------


@dataclass(frozen=True)
class ExpansivityReport:
    n: int
    pairs_checked: int
    min_max_separation: Fraction
    horizon: int
    failures: list[str] = field(default_factory=list)
    sharp_failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.sharp_failures

    def to_json(self) -> dict[str, Any]:
        out = asdict(self)
        out["min_max_separation"] = _frac_json(self.min_max_separation)
        return out


def enumerate_strategies(n: int, max_prefix: int, max_period: int) -> list[Strategy]:
    """All strategies over ``[1, n]`` with the given representation bounds, duplicates removed."""
    seen: dict[Strategy, None] = {}
    cells = range(1, n + 1)
    for plen in range(max_prefix + 1):
        for qlen in range(1, max_period + 1):
            for prefix in itertools.product(cells, repeat=plen):
                for period in itertools.product(cells, repeat=qlen):
                    seen.setdefault(Strategy(prefix, period).normalize(), None)
    return list(seen)


def all_states(n: int) -> list[CellState]:
    return [CellState(bits) for bits in itertools.product((0, 1), repeat=n)]


def _check_pair(x: PhasePoint, y: PhasePoint, horizon: int, orbits: dict, report: dict) -> None:
    ox = orbits.get(x) or orbits.setdefault(x, orbit(f0(x.n), x, horizon))
    oy = orbits.get(y) or orbits.setdefault(y, orbit(f0(y.n), y, horizon))
    best = max(distance(px, py).total for px, py in zip(ox, oy))
    if best < 1:
        report["failures"].append(f"{_pair_label(x, y)}: max distance {best} < 1 within {horizon} steps")
    if x.state == y.state:
        t = prefix_agreement(x.strategy, y.strategy) + 1
        sx = ox[t] if t <= horizon else iterate(f0(x.n), x, t)
        sy = oy[t] if t <= horizon else iterate(f0(y.n), y, t)
        if state_distance(sx.state, sy.state) != 2:
            report["sharp_failures"].append(f"{_pair_label(x, y)}: state distance at step {t} is not 2")
    report["min"] = best if report["min"] is None else min(report["min"], best)
    report["pairs"] += 1


def _pair_label(x: PhasePoint, y: PhasePoint) -> str:
    return f"({x.strategy}, {x.state}) vs ({y.strategy}, {y.state})"


def expansivity_scan(
    n: int,
    max_prefix: int,
    max_period: int,
    horizon: int,
    sample: int | None = None,
    seed: int = 0,
) -> ExpansivityReport:
    """Check that every pair of distinct points separates by at least 1.

    Pairs range over all states and all strategies with prefix length
    ``<= max_prefix`` and period length ``<= max_period``.  With ``sample`` set,
    that many distinct pairs are drawn from the same family instead.  For pairs
    sharing a state, the separation must be exactly 2 cells one step after the
    strategies first disagree.
    """
    if n < 1 or horizon < 0 or max_prefix < 0 or max_period < 1:
        raise ContractError("invalid expansivity scan parameters")
    if n > 3 and sample is None:
        raise ContractError("exhaustive expansivity scans are limited to n <= 3")
    strategies = enumerate_strategies(n, max_prefix, max_period)
    states = all_states(n)
    points = len(strategies) * len(states)
    total = points * (points - 1)
    if sample is None and total > EXPANSIVITY_BUDGET:
        raise BudgetExceeded(total)
    if sample is not None and sample > EXPANSIVITY_BUDGET:
        raise BudgetExceeded(sample)

    report: dict[str, Any] = {"pairs": 0, "min": None, "failures": [], "sharp_failures": []}
    orbits: dict[PhasePoint, list[PhasePoint]] = {}
    for x, y in _pairs(strategies, states, sample, seed):
        _check_pair(x, y, horizon, orbits, report)
    return ExpansivityReport(
        n,
        report["pairs"],
        report["min"] if report["min"] is not None else Fraction(0),
        horizon,
        report["failures"],
        report["sharp_failures"],
    )


def _pairs(strategies: list[Strategy], states: list[CellState], sample: int | None, seed: int) -> Iterator[tuple[PhasePoint, PhasePoint]]:
    if sample is None:
        pts = [PhasePoint(S, E) for S in strategies for E in states]
        for x, y in itertools.permutations(pts, 2):
            yield x, y
        return
    rng = SplitMix64(seed)
    produced = 0
    while produced < sample:
        x = PhasePoint(strategies[rng.below(len(strategies))], states[rng.below(len(states))])
        # half of the draws share a state, where the sharper claim applies
        E = x.state if rng.below(2) else states[rng.below(len(states))]
        y = PhasePoint(strategies[rng.below(len(strategies))], E)
        if x == y:
            continue
        produced += 1
        yield x, y


def non_expansivity_witness(n: int, A: Fraction, horizon: int, strategy: Strategy | None = None) -> tuple[PhasePoint, PhasePoint]:
    """Two distinct points whose ``G_f0`` orbits stay at distance exactly 1 < A.

    Same strategy, states differing only in cell 1: both orbits flip the same
    cells, so the difference never grows.
    """
    if not A > 1:
        raise ContractError("A must exceed 1")
    if strategy is None:
        strategy = Strategy.periodic(range(1, n + 1))
    E = CellState.zeros(n)
    x = PhasePoint(strategy, E)
    y = PhasePoint(strategy, E ^ CellState((1,) + (0,) * (n - 1)))
    f = f0(n)
    px, py = x, y
    for t in range(horizon + 1):
        if distance(px, py).total != 1:
            raise PropertyViolation(f"distance left 1 at step {t}")
        px, py = step_Gf(f, px), step_Gf(f, py)
    return x, y


# -- avalanche ----------------------------------------------------------------

PRINTABLE_LOW, PRINTABLE_SPAN = 0x20, 95


@dataclass(frozen=True)
class AvalancheReport:
    trials: int
    message_bits: int
    seed: int
    mean: str
    stddev: str
    min: int
    max: int
    histogram: list[int]
    all_changed: bool = True

    def to_json(self) -> dict[str, Any]:
        return {
            "trials": self.trials,
            "message_bits": self.message_bits,
            "seed": str(self.seed),
            "mean": self.mean,
            "stddev": self.stddev,
            "min": self.min,
            "max": self.max,
            "histogram": list(self.histogram),
        }

    @property
    def mean_value(self) -> float:
        return float(self.mean)


def avalanche_trial(seed: int, index: int, message_bytes: int) -> tuple[bytes, bytes, int]:
    """Message, its one-bit variant and the digest Hamming distance for trial ``index``.

    The message is ``message_bytes`` printable ASCII characters (codes 32..126)
    drawn with ``derive(seed, index)``; the next draw picks one bit of the
    7-bit encoding to flip.
    """
    rng = derive(seed, index)
    message = bytearray(PRINTABLE_LOW + rng.below(PRINTABLE_SPAN) for _ in range(message_bytes))
    bit = rng.below(7 * message_bytes)
    flipped = bytearray(message)
    flipped[bit // 7] ^= 1 << (6 - bit % 7)
    d = pipeline.hash(bytes(message)).hamming(pipeline.hash(bytes(flipped)))
    return bytes(message), bytes(flipped), d


def avalanche_experiment(trials: int, message_bytes: int, seed: int, workers: int = 1) -> AvalancheReport:
    if trials < 1 or message_bytes < 1:
        raise ContractError("trials and message_bytes must be positive")
    seed &= MASK64

    def run(i: int) -> int:
        return avalanche_trial(seed, i, message_bytes)[2]

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            distances = list(pool.map(run, range(trials)))
    else:
        distances = [run(i) for i in range(trials)]

    histogram = [0] * (pipeline.DIGEST_BITS + 1)
    for d in distances:
        histogram[d] += 1
    mean = Fraction(sum(distances), trials)
    variance = Fraction(sum(d * d for d in distances), trials) - mean * mean
    return AvalancheReport(
        trials=trials,
        message_bits=7 * message_bytes,
        seed=seed,
        mean=f"{float(mean):.6f}",
        stddev=f"{math.sqrt(variance):.6f}",
        min=min(distances),
        max=max(distances),
        histogram=histogram,
        all_changed=histogram[0] == 0,
    )


# -- sampling helpers ---------------------------------------------------------


def random_strategy(rng: SplitMix64, n: int, max_prefix: int = 8, max_period: int = 8) -> Strategy:
    prefix = tuple(1 + rng.below(n) for _ in range(rng.below(max_prefix + 1)))
    period = tuple(1 + rng.below(n) for _ in range(1 + rng.below(max_period)))
    return Strategy(prefix, period)


def random_point(rng: SplitMix64, n: int, max_prefix: int = 8, max_period: int = 8) -> PhasePoint:
    return PhasePoint(random_strategy(rng, n, max_prefix, max_period), CellState(rng.bits(n)))


def random_continuity_pair(rng: SplitMix64, n: int, m: int) -> tuple[PhasePoint, PhasePoint]:
    """Two points with one state whose strategies agree on at least ``m`` terms."""
    x = random_point(rng, n)
    shared = x.strategy.take(m)
    tail = random_strategy(rng, n)
    return x, PhasePoint(tail.then(shared), x.state)


__all__ = [
    "AvalancheReport",
    "BudgetExceeded",
    "ExpansivityReport",
    "PropertyViolation",
    "SensitivityReport",
    "avalanche_experiment",
    "avalanche_trial",
    "continuity_prefix_check",
    "digits_for",
    "enumerate_strategies",
    "expansivity_scan",
    "non_expansivity_witness",
    "periodic_point_near",
    "random_continuity_pair",
    "random_point",
    "sensitivity_witness",
    "transit_point",
]
