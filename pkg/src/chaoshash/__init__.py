"""Hash function built on chaotic iterations, with tools for the underlying dynamics."""

from .dynamics import (
    CellState,
    ContractError,
    IterationFunction,
    PhasePoint,
    Strategy,
    f0,
    identity,
    negate_all,
    orbit,
    parity_mask,
    step_Ff,
    step_Gf,
)
from .metric import ExactDistance, distance, prefix_agreement, state_distance, strategy_distance
from .pipeline import Digest, EncodingError, hash

__version__ = "0.1.0"
