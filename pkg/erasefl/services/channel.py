"""
Packet-erasure channel model.

Erasure probabilities for short packets (normal approximation at finite
blocklength) and long packets (outage under Rayleigh block fading), plus
samplers for fading gains and erasure indicators.
"""

import logging

import numpy as np
from scipy import integrate
from scipy.special import erfc

from erasefl.exceptions import DomainError
from erasefl.models.channel import FadingDraw, LinkBudget, Regime, Transmission

logger = logging.getLogger(__name__)

LOG2E_SQ = float(np.log2(np.e) ** 2)


def _scalar_or_array(value: np.ndarray):
    return float(value) if np.ndim(value) == 0 else value


def _check_snr(gamma) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0) or np.any(np.isnan(gamma)):
        raise DomainError(f"SNR must be nonnegative, got {gamma}")
    return gamma


def shannon_capacity(gamma):
    """C(gamma) = log2(1 + gamma) in bits per channel use."""
    gamma = _check_snr(gamma)
    return _scalar_or_array(np.log1p(gamma) / np.log(2.0))


def channel_dispersion(gamma):
    """V(gamma) = log2(e)^2 * (1 - (1 + gamma)^-2) in bits^2."""
    gamma = _check_snr(gamma)
    return _scalar_or_array(LOG2E_SQ * (1.0 - (1.0 + gamma) ** -2))


def q_function(x):
    """Standard normal tail probability Q(x) = 0.5 * erfc(x / sqrt(2))."""
    x = np.asarray(x, dtype=float)
    return _scalar_or_array(0.5 * erfc(x / np.sqrt(2.0)))


def per_short(gamma, k_bits: int, n_symbols: int):
    """
    Short-packet erasure probability from the normal approximation.

    eps = Q((n C(gamma) - k + 0.5 log2 n) / sqrt(n V(gamma))). At zero SNR
    both capacity and dispersion vanish and the packet is always lost.

    Args:
        gamma: Instantaneous SNR (linear), scalar or array
        k_bits: Message length in bits
        n_symbols: Blocklength in channel uses

    Returns:
        Erasure probability with the shape of gamma
    """
    if not 1 <= k_bits <= n_symbols:
        raise DomainError(f"need 1 <= k <= n, got k={k_bits}, n={n_symbols}")
    gamma = _check_snr(gamma)
    capacity = np.log1p(gamma) / np.log(2.0)
    dispersion = LOG2E_SQ * (1.0 - (1.0 + gamma) ** -2)
    numerator = n_symbols * capacity - k_bits + 0.5 * np.log2(n_symbols)
    with np.errstate(divide="ignore", invalid="ignore"):
        argument = numerator / np.sqrt(n_symbols * dispersion)
    eps = np.where(gamma > 0, 0.5 * erfc(argument / np.sqrt(2.0)), 1.0)
    return _scalar_or_array(eps)


def outage_threshold(rate: float) -> float:
    """SNR threshold gamma_th = 2^R - 1 for error-free long packets."""
    if not rate > 0:
        raise DomainError(f"code rate must be positive, got {rate}")
    return float(np.expm1(rate * np.log(2.0)))


def erasure_prob_long(gamma0: float, rate: float) -> float:
    """
    Long-packet outage probability Pr(gamma0 |h|^2 < gamma_th).

    |h|^2 is unit-mean exponential under Rayleigh fading, so the
    probability is 1 - exp(-gamma_th / gamma0).
    """
    if not gamma0 > 0:
        raise DomainError(f"average SNR must be positive, got {gamma0}")
    return float(-np.expm1(-outage_threshold(rate) / gamma0))


def sample_fading(rng: np.random.Generator, gamma0: float, size: int | None = None) -> FadingDraw:
    """Draw h ~ CN(0, 1) per packet and return |h|^2 and gamma0 |h|^2."""
    h = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)
    gain_sq = np.abs(h) ** 2
    return FadingDraw(gain_sq=_scalar_or_array(gain_sq), gamma=_scalar_or_array(gamma0 * gain_sq))


def sample_erasure(rng: np.random.Generator, eps):
    """Bernoulli reception indicator: 1 with probability 1 - eps."""
    eps = np.asarray(eps, dtype=float)
    if np.any(eps < 0) or np.any(eps > 1) or np.any(np.isnan(eps)):
        raise DomainError(f"erasure probability must lie in [0, 1], got {eps}")
    draws = rng.random(eps.shape) if eps.ndim else rng.random()
    indicators = np.asarray(draws < 1.0 - eps, dtype=np.int8)
    return int(indicators) if indicators.ndim == 0 else indicators


def average_erasure_probability(link: LinkBudget) -> float:
    """
    Erasure probability averaged over Rayleigh block fading.

    Long packets use the outage closed form. Short packets integrate the
    normal approximation against the exponential density of |h|^2.
    """
    if link.forced_erasure is not None:
        return float(link.forced_erasure)
    if link.regime == Regime.LONG_PACKET:
        return erasure_prob_long(link.gamma0, link.rate)

    def integrand(g: float) -> float:
        return per_short(link.gamma0 * g, link.k_bits, link.n_symbols) * np.exp(-g)

    # The integrand drops from ~1 to ~0 around the capacity threshold.
    knee = outage_threshold(link.k_bits / link.n_symbols) / link.gamma0
    head, _ = integrate.quad(integrand, 0.0, knee, limit=200)
    tail, _ = integrate.quad(integrand, knee, np.inf, limit=200)
    return float(min(max(head + tail, 0.0), 1.0))


class ChannelService:
    """Uplink channel for one link budget shared by all users."""

    def __init__(self, link: LinkBudget):
        self.link = link

    def transmit(self, rng: np.random.Generator, num_users: int) -> Transmission:
        """
        Send one packet per user through independent block-fading links.

        Short packets take the normal-approximation erasure probability at
        each user's instantaneous SNR and draw a Bernoulli indicator. Long
        packets are erased exactly when the instantaneous SNR falls below the
        outage threshold.
        """
        fading = sample_fading(rng, self.link.gamma0, size=num_users)
        gamma = np.asarray(fading.gamma)
        if self.link.forced_erasure is not None:
            eps = np.full(num_users, self.link.forced_erasure)
            indicators = sample_erasure(rng, eps)
        elif self.link.regime == Regime.SHORT_PACKET:
            eps = np.asarray(per_short(gamma, self.link.k_bits, self.link.n_symbols))
            indicators = sample_erasure(rng, eps)
        else:
            eps = np.full(num_users, erasure_prob_long(self.link.gamma0, self.link.rate))
            indicators = (gamma >= outage_threshold(self.link.rate)).astype(np.int8)
        return Transmission(fading=fading, erasure_probs=eps, indicators=np.asarray(indicators))
