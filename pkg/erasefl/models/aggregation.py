"""
Central-node aggregation entities.
"""

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from erasefl.exceptions import ContractViolation


class SchemeKind(str, enum.Enum):
    ERROR_FREE = "error_free"
    NO_MEMORY = "no_memory"
    PER_USER_MEMORY = "per_user_memory"
    GLOBAL_MEMORY = "global_memory"


@dataclass
class AggregatorState:
    """
    Mutable CN state owned by one experiment.

    global_history is a ring buffer of past globals, most recent first.
    """

    current_global: np.ndarray
    user_cache: np.ndarray | None = None
    global_history: deque | None = None
    round_index: int = 0


@dataclass(frozen=True)
class RoundReception:
    """What the CN received in one round."""

    indicators: np.ndarray
    received_params: Mapping[int, np.ndarray]
    dataset_sizes: np.ndarray
    received_users: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        indicators = np.asarray(self.indicators, dtype=np.int8)
        sizes = np.asarray(self.dataset_sizes, dtype=float)
        if indicators.shape != sizes.shape:
            raise ContractViolation(
                f"{indicators.size} indicators for {sizes.size} users"
            )
        if not np.all((indicators == 0) | (indicators == 1)):
            raise ContractViolation("indicators must be 0 or 1")
        received = np.flatnonzero(indicators)
        if set(self.received_params) != set(received.tolist()):
            raise ContractViolation(
                "received parameters must be present exactly for users with I_u = 1"
            )
        object.__setattr__(self, "indicators", indicators)
        object.__setattr__(self, "dataset_sizes", sizes)
        object.__setattr__(self, "received_users", received)

    @classmethod
    def from_arrays(cls, indicators, local_params: np.ndarray, dataset_sizes) -> "RoundReception":
        """Keep only the rows of local_params whose indicator is 1."""
        indicators = np.asarray(indicators, dtype=np.int8)
        received = {int(u): local_params[u] for u in np.flatnonzero(indicators)}
        return cls(indicators=indicators, received_params=received, dataset_sizes=dataset_sizes)

    @property
    def num_users(self) -> int:
        return int(self.indicators.size)

    @property
    def participation(self) -> int:
        return int(self.indicators.sum())
