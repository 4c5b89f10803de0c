"""Message -> 256-bit digest through chaotic iterations of the vectorial negation.

Stages::

    encode_message            7-bit (or 8-bit) big-endian character codes
    pad_with_length           + "1" + bin(length so far) + "1"
    mirror_extend             + reversed copy without the final bit
    extend_to_block_multiple  cycle up to the next multiple of 512 bits  -> D
    fold_to_E                 XOR of the 256-bit blocks of D             -> E
    build_intermediate_sequence / build_strategy                        -> S
    compute_digest            flip bit S[k] of E for every k

Bit positions here are 0-based from the leftmost bit; cell ``j + 1`` of the
dynamics corresponds to bit ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .dynamics import CellState, ContractError, PhasePoint, Strategy

DIGEST_BITS = 256
BLOCK_BITS = 512

Mode = Literal["ascii7", "bytes"]


class EncodingError(ValueError):
    def __init__(self, index: int, value: int) -> None:
        super().__init__(f"byte {value:#04x} at index {index} is not 7-bit ASCII")
        self.index = index
        self.value = value


@dataclass(frozen=True)
class BitString:
    """Finite bit sequence stored as a string of ``'0'``/``'1'`` characters."""

    bits: str = ""

    def __post_init__(self) -> None:
        if self.bits.strip("01"):
            raise ContractError("bit strings contain only '0' and '1'")

    def __len__(self) -> int:
        return len(self.bits)

    def __add__(self, other: "BitString") -> "BitString":
        return BitString(self.bits + other.bits)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return BitString(self.bits[i])
        return int(self.bits[i])

    def __str__(self) -> str:
        return self.bits

    def octets(self) -> list[int]:
        """Big-endian values of consecutive 8-bit groups (a short tail is dropped)."""
        b = self.bits
        return [int(b[i : i + 8], 2) for i in range(0, len(b) - 7, 8)]

    def grouped(self, size: int = 8) -> str:
        return " ".join(self.bits[i : i + size] for i in range(0, len(self.bits), size))

    def rotate_left(self, count: int) -> "BitString":
        count %= len(self.bits) or 1
        return BitString(self.bits[count:] + self.bits[:count])

    def rotate_right(self, count: int) -> "BitString":
        return self.rotate_left(-count)


@dataclass(frozen=True)
class Digest:
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < 1 << DIGEST_BITS:
            raise ContractError("digest does not fit in 256 bits")

    @classmethod
    def from_state(cls, state: CellState) -> "Digest":
        if state.n != DIGEST_BITS:
            raise ContractError(f"a digest is {DIGEST_BITS} cells, got {state.n}")
        return cls(state.to_int())

    @classmethod
    def from_hex(cls, text: str) -> "Digest":
        return cls(int(text, 16))

    @property
    def hex(self) -> str:
        return f"{self.value:064X}"

    @property
    def bits(self) -> str:
        return f"{self.value:0256b}"

    def to_bytes(self) -> bytes:
        return self.value.to_bytes(DIGEST_BITS // 8, "big")

    def hamming(self, other: "Digest") -> int:
        return (self.value ^ other.value).bit_count()

    def __str__(self) -> str:
        return self.hex


def encode_message(message: bytes, mode: Mode = "ascii7") -> BitString:
    if mode == "ascii7":
        for i, byte in enumerate(message):
            if byte > 0x7F:
                raise EncodingError(i, byte)
        return BitString("".join(format(byte, "07b") for byte in message))
    if mode == "bytes":
        return BitString("".join(format(byte, "08b") for byte in message))
    raise ContractError(f"unknown encoding mode {mode!r}")


def pad_with_length(s: BitString) -> BitString:
    """Append ``1``, then the length reached so far in minimal binary, then ``1``."""
    marked = s.bits + "1"
    return BitString(marked + format(len(marked), "b") + "1")


def mirror_extend(s: BitString) -> BitString:
    """Append the reversal of ``s`` minus its final bit (length ``2|s| - 1``)."""
    if not len(s):
        raise ContractError("cannot mirror an empty bit string")
    return BitString(s.bits + s.bits[-2::-1])


def extend_to_block_multiple(t: BitString) -> BitString:
    """First ``M`` bits of ``t t t ...`` for the least multiple ``M`` of 512 with ``M >= |t|``."""
    if not len(t):
        raise ContractError("cannot extend an empty bit string")
    size = -(-len(t) // BLOCK_BITS) * BLOCK_BITS
    repeats = -(-size // len(t))
    return BitString((t.bits * repeats)[:size])


def fold_to_E(D: BitString) -> CellState:
    if not len(D) or len(D) % DIGEST_BITS:
        raise ContractError(f"length {len(D)} is not a positive multiple of {DIGEST_BITS}")
    acc = 0
    for i in range(0, len(D), DIGEST_BITS):
        acc ^= int(D.bits[i : i + DIGEST_BITS], 2)
    return CellState(tuple(int(c) for c in format(acc, "0256b")))


def intermediate_length(D: BitString) -> int:
    # eight one-bit rotations of D, minus the last eight octets
    return len(D) - 8


def build_intermediate_sequence(D: BitString) -> tuple[int, ...]:
    """Octet values of D, then of D rotated right by 1 bit, by 2 bits, ...

    The sequence is cut at ``|D| - 8`` values, which is eight passes over the
    string less its final eight octets.
    """
    if not len(D) or len(D) % BLOCK_BITS:
        raise ContractError(f"length {len(D)} is not a positive multiple of {BLOCK_BITS}")
    size = intermediate_length(D)
    values: list[int] = []
    rotation = 0
    while len(values) < size:
        values.extend(D.rotate_right(rotation).octets())
        rotation += 1
    return tuple(values[:size])


def build_strategy(u: Sequence[int]) -> tuple[int, ...]:
    """``S[0] = u[0]``; ``S[n] = (u[n] + 2 S[n-1] + n) mod 256``."""
    if not len(u):
        raise ContractError("the intermediate sequence is empty")
    S = [u[0] % 256]
    for n in range(1, len(u)):
        S.append((u[n] + 2 * S[-1] + n) % 256)
    return tuple(S)


def compute_digest(E: CellState, S: Sequence[int]) -> Digest:
    """Negate bit ``S[k]`` of ``E`` for every ``k`` in order."""
    if E.n != DIGEST_BITS:
        raise ContractError(f"E must have {DIGEST_BITS} cells, got {E.n}")
    bits = list(E.bits)
    for position in S:
        bits[position % DIGEST_BITS] ^= 1
    return Digest(int("".join(map(str, bits)), 2))


def as_phase_point(E: CellState, S: Sequence[int]) -> PhasePoint:
    """Initial point of the dynamics for a hash strategy (bit ``s`` -> cell ``s + 1``).

    After ``len(S)`` steps of ``G_f0`` the state is the digest; the strategy
    then idles on cell 1, which is never reached.
    """
    return PhasePoint(Strategy(tuple(s % DIGEST_BITS + 1 for s in S), (1,)), E)


@dataclass(frozen=True)
class HashTrace:
    """Every intermediate value of one hash computation."""

    encoded: BitString
    padded: BitString
    mirrored: BitString
    D: BitString
    E: CellState
    u: tuple[int, ...]
    S: tuple[int, ...]
    digest: Digest


def trace(message: bytes, mode: Mode = "ascii7") -> HashTrace:
    encoded = encode_message(message, mode)
    padded = pad_with_length(encoded)
    mirrored = mirror_extend(padded)
    D = extend_to_block_multiple(mirrored)
    E = fold_to_E(D)
    u = build_intermediate_sequence(D)
    S = build_strategy(u)
    return HashTrace(encoded, padded, mirrored, D, E, u, S, compute_digest(E, S))


def hash(message: bytes | str, mode: Mode = "ascii7") -> Digest:  # noqa: A001
    if isinstance(message, str):
        message = message.encode("utf-8")
    return trace(message, mode).digest
