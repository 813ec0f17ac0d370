"""
Link budget and fading entities for the uplink packet-erasure channel.
"""

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from erasefl.exceptions import DomainError

if TYPE_CHECKING:
    from erasefl.schemas.experiment import ChannelConfig


class Regime(str, enum.Enum):
    SHORT_PACKET = "short_packet"
    LONG_PACKET = "long_packet"


def db_to_linear(db: float) -> float:
    """Convert a power ratio in dB to linear scale."""
    return float(10.0 ** (db / 10.0))


def linear_to_db(value: float) -> float:
    """Convert a linear power ratio to dB."""
    if value <= 0:
        raise DomainError(f"cannot express nonpositive ratio {value} in dB")
    return float(10.0 * np.log10(value))


def blocklength(k_bits: int, rate: float) -> int:
    """
    Blocklength n = ceil(k / R) in channel uses.

    The rate is read as the decimal it was written as, so 3 bits at
    rate 0.3 give 10 symbols rather than the 11 float division yields.
    """
    if k_bits < 1:
        raise DomainError(f"message length must be at least 1 bit, got {k_bits}")
    if not 0 < rate <= 1:
        raise DomainError(f"code rate must lie in (0, 1], got {rate}")
    return math.ceil(Fraction(k_bits) / Fraction(repr(float(rate))))


@dataclass(frozen=True)
class LinkBudget:
    """Per-experiment uplink configuration (linear SNR, k, R, n, regime)."""

    gamma0: float
    k_bits: int
    rate: float
    n_symbols: int
    regime: Regime = Regime.SHORT_PACKET
    forced_erasure: float | None = None

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise DomainError(f"average SNR must be positive, got {self.gamma0}")
        if self.n_symbols != blocklength(self.k_bits, self.rate):
            raise DomainError(
                f"blocklength {self.n_symbols} does not equal ceil({self.k_bits}/{self.rate})"
            )
        if self.forced_erasure is not None and not 0 <= self.forced_erasure <= 1:
            raise DomainError(f"forced erasure must lie in [0, 1], got {self.forced_erasure}")

    @classmethod
    def build(
        cls,
        gamma0: float,
        k_bits: int,
        rate: float,
        regime: Regime = Regime.SHORT_PACKET,
        forced_erasure: float | None = None,
    ) -> "LinkBudget":
        return cls(
            gamma0=gamma0,
            k_bits=k_bits,
            rate=rate,
            n_symbols=blocklength(k_bits, rate),
            regime=regime,
            forced_erasure=forced_erasure,
        )

    @classmethod
    def from_config(cls, config: "ChannelConfig") -> "LinkBudget":
        """Build a link budget from a validated channel config (SNR in dB)."""
        return cls.build(
            gamma0=db_to_linear(config.gamma0_db),
            k_bits=config.k_bits,
            rate=config.rate,
            regime=config.regime,
            forced_erasure=config.forced_erasure,
        )


@dataclass(frozen=True)
class FadingDraw:
    """Squared channel gain and instantaneous SNR, scalar or one entry per user."""

    gain_sq: float | np.ndarray
    gamma: float | np.ndarray


@dataclass(frozen=True)
class Transmission:
    """Outcome of one uplink slot for every user."""

    fading: FadingDraw
    erasure_probs: np.ndarray
    indicators: np.ndarray
