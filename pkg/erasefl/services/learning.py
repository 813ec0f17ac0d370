"""
Device-side learning: squared-error regression and local gradient descent.
"""

import logging
from typing import Sequence

import numpy as np

from erasefl.exceptions import ConfigurationError, DomainError
from erasefl.models.learning import Dataset, FeatureMap
from erasefl.schemas.experiment import LearnerConfig

logger = logging.getLogger(__name__)


def _check_dimension(omega: np.ndarray, features: np.ndarray) -> None:
    if omega.shape != (features.shape[1],):
        raise ConfigurationError(
            f"model has dimension {omega.shape} but features have {features.shape[1]} entries"
        )


def pointwise_loss(omega, x: float, y: float, feature_map: FeatureMap) -> float:
    """f(omega, x, y) = 1/2 (y - omega . phi(x))^2."""
    omega = np.asarray(omega, dtype=float)
    phi = feature_map.transform(x)
    _check_dimension(omega, phi)
    residual = y - float(phi[0] @ omega)
    return 0.5 * residual ** 2


def local_loss(omega, dataset: Dataset) -> float:
    """F_u(omega): mean pointwise loss over the device's samples."""
    omega = np.asarray(omega, dtype=float)
    _check_dimension(omega, dataset.features)
    residuals = dataset.y - dataset.features @ omega
    return float(0.5 * np.mean(residuals ** 2))


def local_gradient(omega, dataset: Dataset) -> np.ndarray:
    """Gradient of F_u: mean of -(y - omega . phi) phi."""
    omega = np.asarray(omega, dtype=float)
    _check_dimension(omega, dataset.features)
    residuals = dataset.y - dataset.features @ omega
    return -(dataset.features.T @ residuals) / dataset.size


def local_update(omega_global, dataset: Dataset, config: LearnerConfig) -> np.ndarray:
    """
    Run the device's local gradient-descent steps from the broadcast global.

    Args:
        omega_global: Global parameter received from the CN
        dataset: Device's training data
        config: Learning rate and number of local iterations

    Returns:
        Local parameter after config.local_iterations steps
    """
    omega = np.array(omega_global, dtype=float)
    for _ in range(config.local_iterations):
        omega = omega - config.eta * local_gradient(omega, dataset)
    return omega


def global_gradient_step(omega, datasets: Sequence[Dataset], eta: float) -> np.ndarray:
    """Combined single-step form: omega - (eta / D) sum_u D_u grad F_u(omega)."""
    if not datasets:
        raise DomainError("need at least one dataset")
    omega = np.asarray(omega, dtype=float)
    sizes = np.array([d.size for d in datasets], dtype=float)
    gradients = np.stack([local_gradient(omega, d) for d in datasets])
    return omega - eta * (sizes @ gradients) / sizes.sum()


def pooled_mse(omega, datasets: Sequence[Dataset]) -> float:
    """Mean pointwise loss over the union of all devices' samples."""
    omega = np.asarray(omega, dtype=float)
    total = 0.0
    count = 0
    for dataset in datasets:
        _check_dimension(omega, dataset.features)
        residuals = dataset.y - dataset.features @ omega
        total += float(residuals @ residuals)
        count += dataset.size
    return 0.5 * total / count


def pooled_least_squares(datasets: Sequence[Dataset]) -> tuple[np.ndarray, float]:
    """Least-squares optimum of the pooled data and its MSE."""
    features = np.vstack([d.features for d in datasets])
    targets = np.concatenate([d.y for d in datasets])
    omega, *_ = np.linalg.lstsq(features, targets, rcond=None)
    return omega, pooled_mse(omega, datasets)


def stability_threshold(datasets: Sequence[Dataset]) -> float:
    """1 / L, L the largest eigenvalue of the pooled feature second moment."""
    features = np.vstack([d.features for d in datasets])
    second_moment = features.T @ features / features.shape[0]
    largest = float(np.linalg.eigvalsh(second_moment)[-1])
    return 1.0 / largest if largest > 0 else float("inf")


class LocalLearner:
    """Computes every device's local update for one round."""

    def __init__(self, datasets: Sequence[Dataset], config: LearnerConfig):
        if not datasets:
            raise DomainError("need at least one device")
        self.datasets = list(datasets)
        self.config = config

    @property
    def dataset_sizes(self) -> np.ndarray:
        return np.array([d.size for d in self.datasets], dtype=float)

    def train(self, omega_global: np.ndarray) -> np.ndarray:
        """Local parameters of all devices, one row per device."""
        return np.stack([local_update(omega_global, d, self.config) for d in self.datasets])

    def mse(self, omega: np.ndarray) -> float:
        """Pooled MSE of a global parameter over every device's samples."""
        return pooled_mse(omega, self.datasets)
