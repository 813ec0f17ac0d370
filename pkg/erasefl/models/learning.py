"""
Device-side data entities: feature maps and local datasets.
"""

import enum
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre

from erasefl.exceptions import DomainError


class FeatureBasis(str, enum.Enum):
    MONOMIAL = "monomial"
    LEGENDRE = "legendre"


@dataclass(frozen=True)
class FeatureMap:
    """
    Polynomial feature map of a scalar input.

    The monomial basis is [1, x, ..., x^d]. The Legendre basis maps the
    domain onto [-1, 1] and scales P_j by sqrt(2j + 1), which makes the
    features orthonormal under a uniform input over the domain.
    """

    degree: int = 2
    basis: FeatureBasis = FeatureBasis.MONOMIAL
    domain: tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        if self.degree < 0:
            raise DomainError(f"feature degree must be nonnegative, got {self.degree}")
        low, high = self.domain
        if not high > low:
            raise DomainError(f"feature domain must be increasing, got {self.domain}")

    @property
    def dimension(self) -> int:
        return self.degree + 1

    def transform(self, x) -> np.ndarray:
        """Design matrix with one row per input value."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.basis == FeatureBasis.MONOMIAL:
            return np.vander(x, self.dimension, increasing=True)
        low, high = self.domain
        z = 2.0 * (x - low) / (high - low) - 1.0
        scale = np.sqrt(2.0 * np.arange(self.dimension) + 1.0)
        return legendre.legvander(z, self.degree) * scale


@dataclass(frozen=True)
class Dataset:
    """One device's training samples with their design matrix."""

    x: np.ndarray
    y: np.ndarray
    feature_map: FeatureMap = field(default_factory=FeatureMap)
    features: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).ravel()
        y = np.asarray(self.y, dtype=float).ravel()
        if x.size == 0:
            raise DomainError("dataset must contain at least one sample")
        if x.size != y.size:
            raise DomainError(f"dataset has {x.size} inputs but {y.size} targets")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DomainError("dataset values must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "features", self.feature_map.transform(x))

    @property
    def size(self) -> int:
        return int(self.x.size)
