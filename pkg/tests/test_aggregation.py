"""
Tests for central-node aggregation.
"""

from collections import deque

import numpy as np
import pytest
from pydantic import ValidationError

from erasefl.exceptions import ContractViolation
from erasefl.models.aggregation import AggregatorState, RoundReception, SchemeKind
from erasefl.schemas.experiment import SchemeConfig
from erasefl.services.aggregation import (
    Aggregator,
    aggregate_error_free,
    aggregate_global_memory,
    aggregate_no_memory,
    aggregate_per_user_memory,
    history_substitute,
)


def reception(indicators, params, sizes=None) -> RoundReception:
    params = np.asarray(params, dtype=float).reshape(len(indicators), -1)
    sizes = np.ones(len(indicators)) if sizes is None else sizes
    return RoundReception.from_arrays(indicators, params, sizes)


class TestRoundReception:
    """Test the reception contract."""

    def test_missing_parameter_rejected(self):
        """Test a received user must carry parameters."""
        with pytest.raises(ContractViolation):
            RoundReception(indicators=[1, 0], received_params={}, dataset_sizes=[1, 1])

    def test_extra_parameter_rejected(self):
        """Test an erased user must not carry parameters."""
        with pytest.raises(ContractViolation):
            RoundReception(indicators=[1, 0], received_params={0: np.ones(1), 1: np.ones(1)}, dataset_sizes=[1, 1])

    def test_size_mismatch_rejected(self):
        """Test one dataset size per indicator."""
        with pytest.raises(ContractViolation):
            RoundReception(indicators=[1], received_params={0: np.ones(1)}, dataset_sizes=[1, 1])


class TestErrorFree:
    """Test FedAvg without erasures."""

    def test_examples(self):
        """Test equal and unequal dataset sizes."""
        np.testing.assert_array_equal(aggregate_error_free(reception([1, 1], [[2], [4]])), [3.0])
        np.testing.assert_array_equal(aggregate_error_free(reception([1, 1], [[0], [4]], [100, 300])), [3.0])

    def test_identical_inputs(self):
        """Test identical local parameters are returned unchanged."""
        omega = [0.5, -1.5, 2.0]
        np.testing.assert_allclose(aggregate_error_free(reception([1, 1, 1], [omega] * 3)), omega)

    def test_missing_user(self):
        """Test an erased user is a contract violation."""
        with pytest.raises(ContractViolation):
            aggregate_error_free(reception([1, 0], [[2], [4]]))


class TestNoMemory:
    """Test averaging over received users only."""

    def test_examples(self):
        """Test mean of received, full reception and the all-erased case."""
        state = AggregatorState(current_global=np.array([7.0]))
        np.testing.assert_array_equal(aggregate_no_memory(reception([1, 0, 1], [[2], [100], [6]]), state), [4.0])
        full = reception([1, 1], [[2], [4]], [1, 3])
        np.testing.assert_array_equal(aggregate_no_memory(full, state), aggregate_error_free(full))
        np.testing.assert_array_equal(aggregate_no_memory(reception([0, 0], [[2], [4]]), state), [7.0])

    def test_retained_global_is_a_copy(self):
        """Test the retained global does not alias the state."""
        state = AggregatorState(current_global=np.array([7.0]))
        result = aggregate_no_memory(reception([0], [[1]]), state)
        result[0] = 0.0
        assert state.current_global[0] == 7.0


class TestPerUserMemory:
    """Test the per-user cache."""

    def test_examples(self):
        """Test fresh plus cached, and the all-erased average of caches."""
        state = AggregatorState(current_global=np.zeros(1), user_cache=np.array([[0.0], [6.0]]))
        np.testing.assert_array_equal(aggregate_per_user_memory(reception([1, 0], [[2], [99]]), state), [4.0])
        np.testing.assert_array_equal(state.user_cache, [[2.0], [6.0]])
        np.testing.assert_array_equal(aggregate_per_user_memory(reception([0, 0], [[5], [5]]), state), [4.0])

    def test_full_reception_equals_error_free(self):
        """Test I = 1 reduces to FedAvg."""
        state = AggregatorState(current_global=np.zeros(2), user_cache=np.zeros((3, 2)))
        full = reception([1, 1, 1], [[1, 2], [3, 4], [5, 7]], [10, 20, 30])
        np.testing.assert_array_equal(aggregate_per_user_memory(full, state), aggregate_error_free(full))

    def test_uninitialized_cache(self):
        """Test a missing cache is a contract violation."""
        with pytest.raises(ContractViolation):
            aggregate_per_user_memory(reception([1], [[1]]), AggregatorState(current_global=np.zeros(1)))


class TestGlobalMemory:
    """Test the m-deep history of globals."""

    def test_example(self):
        """Test m = 2 with equal alphas."""
        state = AggregatorState(current_global=np.array([4.0]), global_history=deque([np.array([4.0]), np.array([8.0])], maxlen=2))
        result = aggregate_global_memory(reception([1, 0], [[2], [99]]), state, [0.5, 0.5])
        np.testing.assert_array_equal(result, [4.0])
        assert [h[0] for h in state.global_history] == [4.0, 4.0]

    def test_depth_one_uses_previous_global(self):
        """Test m = 1 substitutes exactly the previous global."""
        state = AggregatorState(current_global=np.array([3.0]), global_history=deque([np.array([3.0])], maxlen=1))
        result = aggregate_global_memory(reception([1, 0], [[5], [0]]), state, [1.0])
        np.testing.assert_array_equal(result, [4.0])

    def test_full_reception_equals_error_free(self):
        """Test I = 1 reduces to FedAvg and still records history."""
        state = AggregatorState(current_global=np.zeros(1), global_history=deque([np.zeros(1)], maxlen=3))
        full = reception([1, 1], [[1], [2]], [1, 3])
        np.testing.assert_array_equal(aggregate_global_memory(full, state, [1 / 3] * 3), aggregate_error_free(full))
        assert len(state.global_history) == 2

    def test_warm_up_renormalizes(self):
        """Test weights renormalize over a short history."""
        history = [np.array([2.0]), np.array([6.0])]
        np.testing.assert_allclose(history_substitute(history, [0.5, 0.25, 0.25]), [(0.5 * 2 + 0.25 * 6) / 0.75])

    def test_warm_up_without_mass_uses_initial(self):
        """Test a massless prefix falls back to the oldest stored global."""
        history = [np.array([2.0]), np.array([6.0])]
        np.testing.assert_array_equal(history_substitute(history, [0.0, 0.0, 1.0]), [6.0])

    def test_history_discipline(self):
        """Test the buffer holds min(t + 1, m) globals, newest first."""
        aggregator = Aggregator(SchemeConfig(kind="global_memory", memory_depth=3), np.zeros(1), 2)
        rng = np.random.default_rng(0)
        for t in range(6):
            new_global = aggregator.aggregate(reception(rng.integers(0, 2, 2), rng.normal(size=(2, 1))))
            history = aggregator.state.global_history
            assert len(history) == min(t + 2, 3)
            assert history[0] is new_global


class TestSchemeConfig:
    """Test scheme validation."""

    def test_default_equal_alphas(self):
        """Test alphas default to 1/m."""
        assert SchemeConfig(kind="global_memory", memory_depth=4).alphas == [0.25] * 4

    @pytest.mark.parametrize("alphas", [[0.5, 0.4], [1.5, -0.5], [1.0]])
    def test_invalid_alphas(self, alphas):
        """Test alphas must be a nonnegative distribution of length m."""
        with pytest.raises(ValidationError):
            SchemeConfig(kind="global_memory", memory_depth=2, alphas=alphas)

    def test_alphas_only_for_global_memory(self):
        """Test other schemes reject alphas."""
        with pytest.raises(ValidationError):
            SchemeConfig(kind="no_memory", alphas=[1.0])

    def test_labels(self):
        """Test labels and written depths."""
        assert SchemeConfig(kind="global_memory", memory_depth=2).label == "global_memory_m2"
        assert SchemeConfig(kind="per_user_memory").depth == 0


class TestAggregatorProperties:
    """Test properties shared by all schemes."""

    KINDS = [SchemeKind.NO_MEMORY, SchemeKind.PER_USER_MEMORY, SchemeKind.GLOBAL_MEMORY]

    @pytest.mark.parametrize("kind", list(SchemeKind))
    def test_erasure_free_equivalence(self, kind):
        """Test every scheme returns the FedAvg value bitwise when nothing is erased."""
        rng = np.random.default_rng(1)
        sizes = rng.integers(1, 50, 5).astype(float)
        reference = Aggregator(SchemeConfig(kind="error_free"), np.zeros(3), 5)
        aggregator = Aggregator(SchemeConfig(kind=kind, memory_depth=2), np.zeros(3), 5)
        for _ in range(10):
            params = rng.normal(size=(5, 3))
            full = RoundReception.from_arrays(np.ones(5), params, sizes)
            np.testing.assert_array_equal(aggregator.aggregate(full), reference.aggregate(full))
        assert aggregator.state.round_index == 10

    @pytest.mark.parametrize("kind", KINDS)
    def test_convexity(self, kind):
        """Test outputs stay within the coordinate-wise hull of all inputs seen."""
        rng = np.random.default_rng(2)
        aggregator = Aggregator(SchemeConfig(kind=kind, memory_depth=3), np.zeros(2), 4)
        low, high = np.zeros(2), np.zeros(2)
        for _ in range(50):
            params = rng.normal(size=(4, 2))
            indicators = rng.integers(0, 2, 4)
            received = params[indicators == 1]
            if received.size:
                low = np.minimum(low, received.min(axis=0))
                high = np.maximum(high, received.max(axis=0))
            result = aggregator.aggregate(RoundReception.from_arrays(indicators, params, rng.integers(1, 9, 4)))
            assert np.all(result >= low - 1e-12) and np.all(result <= high + 1e-12)

    @pytest.mark.parametrize("kind", KINDS)
    def test_permutation_equivariance(self, kind):
        """Test permuting users leaves the output unchanged."""
        rng = np.random.default_rng(3)
        perm = rng.permutation(5)
        plain = Aggregator(SchemeConfig(kind=kind, memory_depth=2), np.zeros(2), 5)
        permuted = Aggregator(SchemeConfig(kind=kind, memory_depth=2), np.zeros(2), 5)
        sizes = rng.integers(1, 20, 5).astype(float)
        for _ in range(20):
            params = rng.normal(size=(5, 2))
            indicators = rng.integers(0, 2, 5)
            a = plain.aggregate(RoundReception.from_arrays(indicators, params, sizes))
            b = permuted.aggregate(RoundReception.from_arrays(indicators[perm], params[perm], sizes[perm]))
            np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)
