"""
Central-node aggregation under packet erasure.

Four schemes share one weighted-average kernel so that, with every packet
received, they produce bitwise-identical globals.
"""

import logging
from collections import deque
from typing import Sequence

import numpy as np

from erasefl.exceptions import ContractViolation
from erasefl.models.aggregation import AggregatorState, RoundReception, SchemeKind
from erasefl.schemas.experiment import SchemeConfig

logger = logging.getLogger(__name__)


def _weighted_average(weights: np.ndarray, params: np.ndarray) -> np.ndarray:
    return (weights / weights.sum()) @ params


def _fresh_matrix(reception: RoundReception) -> np.ndarray:
    return np.stack([reception.received_params[int(u)] for u in reception.received_users])


def aggregate_error_free(reception: RoundReception) -> np.ndarray:
    """D_u-weighted average of every user's fresh parameter."""
    if reception.participation != reception.num_users:
        raise ContractViolation(
            f"error-free aggregation needs all {reception.num_users} users, "
            f"got {reception.participation}"
        )
    return _weighted_average(reception.dataset_sizes, _fresh_matrix(reception))


def aggregate_no_memory(reception: RoundReception, state: AggregatorState) -> np.ndarray:
    """
    Weighted average over the users received this round.

    When every packet is erased the CN keeps the previous global.
    """
    if reception.participation == 0:
        return np.array(state.current_global, copy=True)
    sizes = reception.dataset_sizes[reception.received_users]
    return _weighted_average(sizes, _fresh_matrix(reception))


def aggregate_per_user_memory(reception: RoundReception, state: AggregatorState) -> np.ndarray:
    """
    Weighted average over all users, erased users replaced by their cache.

    The cache entries of received users are refreshed.
    """
    if state.user_cache is None or state.user_cache.shape[0] != reception.num_users:
        raise ContractViolation("per-user cache is not initialized for every user")
    for u in reception.received_users:
        state.user_cache[u] = reception.received_params[int(u)]
    return _weighted_average(reception.dataset_sizes, state.user_cache.copy())


def history_substitute(history: Sequence[np.ndarray], alphas: Sequence[float]) -> np.ndarray:
    """
    Weighted average of the stored globals, most recent first.

    Before the buffer is full the weights are renormalized over the stored
    prefix. A prefix without weight mass falls back to the oldest stored
    global, the initial broadcast.
    """
    if not history:
        raise ContractViolation("global history is empty")
    weights = np.asarray(alphas[: len(history)], dtype=float)
    if weights.sum() <= 0:
        return np.array(history[-1], copy=True)
    return _weighted_average(weights, np.stack(list(history)))


def aggregate_global_memory(
    reception: RoundReception,
    state: AggregatorState,
    alphas: Sequence[float],
) -> np.ndarray:
    """
    Weighted average over all users, erased users replaced by a weighted
    average of the last m globals. The result is pushed onto the history.
    """
    if state.global_history is None:
        raise ContractViolation("global history is not initialized")
    if reception.participation == reception.num_users:
        contributions = _fresh_matrix(reception)
    else:
        substitute = history_substitute(state.global_history, alphas)
        contributions = np.tile(substitute, (reception.num_users, 1))
        for u in reception.received_users:
            contributions[u] = reception.received_params[int(u)]
    new_global = _weighted_average(reception.dataset_sizes, contributions)
    state.global_history.appendleft(new_global)
    return new_global


class Aggregator:
    """CN-side state machine for one experiment instance."""

    def __init__(self, scheme: SchemeConfig, initial_global: np.ndarray, num_users: int):
        self.scheme = scheme
        initial = np.array(initial_global, dtype=float)
        self.state = AggregatorState(current_global=initial.copy())
        if scheme.kind == SchemeKind.PER_USER_MEMORY:
            self.state.user_cache = np.tile(initial, (num_users, 1))
        elif scheme.kind == SchemeKind.GLOBAL_MEMORY:
            self.state.global_history = deque([initial.copy()], maxlen=scheme.memory_depth)

    @property
    def current_global(self) -> np.ndarray:
        return self.state.current_global

    def aggregate(self, reception: RoundReception) -> np.ndarray:
        """Aggregate one round's reception and advance the round index."""
        kind = self.scheme.kind
        if kind == SchemeKind.ERROR_FREE:
            new_global = aggregate_error_free(reception)
        elif kind == SchemeKind.NO_MEMORY:
            new_global = aggregate_no_memory(reception, self.state)
        elif kind == SchemeKind.PER_USER_MEMORY:
            new_global = aggregate_per_user_memory(reception, self.state)
        else:
            new_global = aggregate_global_memory(reception, self.state, self.scheme.alphas)

        self.state.current_global = new_global
        self.state.round_index += 1
        return new_global
