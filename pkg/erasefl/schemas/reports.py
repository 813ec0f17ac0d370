"""
Report and result-row schemas.
"""

import numpy as np
from pydantic import BaseModel, Field, field_validator

from erasefl.exceptions import DomainError


class ErasureProfile(BaseModel):
    """Per-user erasure probabilities."""
    eps: list[float] = Field(..., min_length=1, description="Erasure probability of each user")

    @field_validator("eps")
    @classmethod
    def validate_probabilities(cls, v: list[float]) -> list[float]:
        """Validate that every entry is a probability."""
        if any(not 0 <= e <= 1 for e in v):
            raise ValueError("erasure probabilities must lie in [0, 1]")
        return v

    @classmethod
    def parse(cls, text: str) -> "ErasureProfile":
        """Parse a comma-separated list such as '0.1,0.2'."""
        try:
            values = [float(item) for item in text.split(",") if item.strip()]
        except ValueError:
            raise DomainError(f"malformed erasure profile {text!r}")
        if not values or any(not 0 <= e <= 1 for e in values):
            raise DomainError(f"erasure profile {text!r} must list values in [0, 1]")
        return cls(eps=values)

    @property
    def num_users(self) -> int:
        return len(self.eps)

    @property
    def success(self) -> np.ndarray:
        """Reception probabilities 1 - eps_u."""
        return 1.0 - np.asarray(self.eps, dtype=float)


class LeCamReport(BaseModel):
    """Poisson-approximation check of the participation count."""
    lambda_: float = Field(..., description="Mean participation sum(1 - eps_u)")
    tv_sum: float = Field(..., description="Sum of absolute pmf differences")
    bound: float = Field(..., description="2 * sum((1 - eps_u)^2)")
    holds: bool


class FluctuationStats(BaseModel):
    """Trailing-window statistics of an MSE series."""
    mean: float
    variance: float


class SummaryRow(BaseModel):
    """One line of summary.csv."""
    scheme: str
    rate: float
    gamma0_db: float
    m: int
    rounds: int
    final_mse_mean: float
    final_mse_var: float
    trailing_mse_var: float
    mean_erasure: float


class SweepRow(BaseModel):
    """One line of sweep.csv."""
    scheme: str
    rate: float
    gamma0_db: float
    m: int
    rounds: int
    final_mse: float
