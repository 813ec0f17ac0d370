"""
Participation diagnostics for the no-memory scheme.
"""

import itertools
import math
import logging
from typing import Sequence

import numpy as np
from scipy.stats import poisson

from erasefl.exceptions import DomainError, SizeError
from erasefl.models.analysis import Outcome, Pmf
from erasefl.schemas.reports import ErasureProfile, FluctuationStats, LeCamReport

logger = logging.getLogger(__name__)

MAX_ENUMERATED_USERS = 20


def poisson_binomial_pmf(profile: ErasureProfile) -> Pmf:
    """
    Exact pmf of the participation count S = sum I_u.

    Convolves one Bernoulli(1 - eps_u) at a time, O(U^2) overall.
    """
    mass = np.ones(1)
    for p in profile.success:
        mass = np.convolve(mass, [1.0 - p, p])
    return Pmf(support=np.arange(profile.num_users + 1), mass=mass)


def _check_enumerable(profile: ErasureProfile) -> None:
    if profile.num_users > MAX_ENUMERATED_USERS:
        raise SizeError(
            f"enumerating 2^{profile.num_users} patterns exceeds the "
            f"{MAX_ENUMERATED_USERS}-user limit"
        )


def _pattern_probability(pattern: tuple[int, ...], eps: Sequence[float]) -> float:
    probability = 1.0
    for indicator, e in zip(pattern, eps):
        probability *= (1.0 - e) if indicator else e
    return probability


def brute_force_participation_pmf(profile: ErasureProfile) -> Pmf:
    """Participation pmf by enumerating all 2^U indicator patterns."""
    _check_enumerable(profile)
    mass = np.zeros(profile.num_users + 1)
    for pattern in itertools.product((0, 1), repeat=profile.num_users):
        mass[sum(pattern)] += _pattern_probability(pattern, profile.eps)
    return Pmf(support=np.arange(profile.num_users + 1), mass=mass)


def outcome_pmf(profile: ErasureProfile, local_params: Sequence[np.ndarray]) -> list[Outcome]:
    """
    Every no-memory round outcome with its probability.

    Each indicator pattern maps to the plain mean of the received local
    parameters; the all-erased pattern keeps the previous global (value None).
    """
    _check_enumerable(profile)
    params = np.asarray(local_params, dtype=float)
    if params.shape[0] != profile.num_users:
        raise DomainError(
            f"{params.shape[0]} local parameters for {profile.num_users} users"
        )
    outcomes = []
    for pattern in itertools.product((0, 1), repeat=profile.num_users):
        received = np.flatnonzero(pattern)
        value = params[received].mean(axis=0) if received.size else None
        outcomes.append(
            Outcome(
                pattern=pattern,
                probability=_pattern_probability(pattern, profile.eps),
                value=value,
            )
        )
    return outcomes


def _exp_excess(p: float) -> float:
    """exp(-p) - 1 + p, summed as a series where direct evaluation cancels."""
    if p >= 0.5:
        return math.expm1(-p) + p
    total, term = 0.0, -p
    for j in range(2, 24):
        term *= -p / j
        total += term
    return total


def _pmf_difference(success: np.ndarray) -> np.ndarray:
    """
    Poisson-binomial pmf minus the Poisson(lambda) pmf on 0..U.

    Telescopes prod(a_u) - prod(b_u) over the per-user generating functions
    a_u(z) = 1 - p_u + p_u z and b_u(z) = exp(p_u (z - 1)). Each term carries
    a_u - b_u with its coefficients written out, so no value near 1 is
    subtracted and the result keeps full relative precision for tiny p_u.
    """
    size = success.size + 1
    support = np.arange(size)
    later = np.concatenate([np.cumsum(success[::-1])[::-1][1:], [0.0]])
    prefix = np.zeros(size)
    prefix[0] = 1.0
    difference = np.zeros(size)
    for p, rest in zip(success, later):
        factor = -poisson.pmf(support, p)
        factor[0] = -_exp_excess(float(p))
        factor[1] = -p * math.expm1(-p)
        term = np.convolve(prefix, factor)[:size]
        difference += np.convolve(term, poisson.pmf(support, rest))[:size]
        prefix = np.convolve(prefix, [1.0 - p, p])[:size]
    return difference


def le_cam_check(profile: ErasureProfile) -> LeCamReport:
    """
    Compare the participation pmf with Poisson(lambda), lambda = sum(1 - eps_u).

    The Poisson-binomial pmf vanishes beyond U, so the infinite sum reduces
    to the first U + 1 terms plus the Poisson survival mass beyond U.
    """
    success = profile.success
    lam = float(success.sum())
    tail = float(poisson.sf(profile.num_users, lam))
    tv_sum = float(np.abs(_pmf_difference(success)).sum()) + tail
    bound = float(2.0 * np.sum(success ** 2))
    holds = tv_sum <= bound if lam == 0 else tv_sum < bound
    return LeCamReport(lambda_=lam, tv_sum=tv_sum, bound=bound, holds=holds)


def fluctuation_stats(mse_series: Sequence[float], window: int) -> FluctuationStats:
    """Mean and unbiased variance over the trailing window of a series."""
    series = np.asarray(mse_series, dtype=float)
    if window < 2:
        raise DomainError(f"window must cover at least 2 rounds, got {window}")
    if window > series.size:
        raise DomainError(f"window of {window} rounds exceeds series length {series.size}")
    tail = series[-window:]
    return FluctuationStats(mean=float(tail.mean()), variance=float(tail.var(ddof=1)))


def rounds_to_plateau(mse_series: Sequence[float], window: int, tolerance: float = 0.1) -> int:
    """
    First round whose value is within (1 + tolerance) of the plateau.

    The plateau is the mean of the trailing window.
    """
    series = np.asarray(mse_series, dtype=float)
    plateau = fluctuation_stats(series, window).mean
    within = np.flatnonzero(series <= (1.0 + tolerance) * plateau)
    return int(within[0]) if within.size else series.size
