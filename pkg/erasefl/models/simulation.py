"""
Round-level records and Monte Carlo results.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RoundLog:
    round: int
    elapsed_symbols: int
    indicators: np.ndarray
    participation: int
    mse: float
    snr: np.ndarray


@dataclass(frozen=True)
class MonteCarloResult:
    """Per-replica MSE trajectories and their replica-order reduction."""

    replica_mse: np.ndarray
    replica_participation: np.ndarray
    mean_mse: np.ndarray
    final_mse_mean: float
    final_mse_var: float
    trailing_mse_var: float
    rounds: int
    n_symbols: int
    mean_erasure: float

    @property
    def replicas(self) -> int:
        return int(self.replica_mse.shape[0])
