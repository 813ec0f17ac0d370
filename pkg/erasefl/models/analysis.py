"""
Distribution entities for participation diagnostics.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Pmf:
    """Probability mass over an ordered integer support."""

    support: np.ndarray
    mass: np.ndarray

    def __getitem__(self, j: int) -> float:
        return float(self.mass[j])


@dataclass(frozen=True)
class Outcome:
    """One indicator pattern of a no-memory round with its probability and value."""

    pattern: tuple[int, ...]
    probability: float
    value: np.ndarray | None

    @property
    def retains_previous(self) -> bool:
        return self.value is None
