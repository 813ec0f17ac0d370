"""
Config loading and service construction for the commands.
"""

import logging
from pathlib import Path
from typing import TypeVar

from erasefl.config import settings
from erasefl.models.channel import LinkBudget, Regime
from erasefl.repositories.config import ConfigRepository
from erasefl.schemas.experiment import ChannelConfig, RunConfig
from erasefl.services.simulation import SimulationService

logger = logging.getLogger(__name__)

RunConfigT = TypeVar("RunConfigT", bound=RunConfig)


def load_config(
    path: Path | str,
    model: type[RunConfigT] = RunConfig,
    seed: int | None = None,
    replicas: int | None = None,
) -> RunConfigT:
    """
    Load a config file, applying command-line overrides before validation.

    Args:
        path: YAML or JSON config file
        model: RunConfig or SweepConfig
        seed: Replaces base_seed when given
        replicas: Replaces replicas when given

    Raises:
        ConfigurationError: If the file is missing or invalid
    """
    overrides = {"base_seed": seed, "replicas": replicas}
    return ConfigRepository(path).load(model, overrides=overrides)


def warn_if_short_packet(channel: ChannelConfig) -> None:
    """Warn when the normal approximation is used below its validated blocklength."""
    link = LinkBudget.from_config(channel)
    if (
        link.regime == Regime.SHORT_PACKET
        and channel.forced_erasure is None
        and link.n_symbols < settings.short_packet_warn_below
    ):
        logger.warning(
            "blocklength n = %d (k = %d, R = %g) is below %d; "
            "the normal approximation may be inaccurate",
            link.n_symbols, link.k_bits, link.rate, settings.short_packet_warn_below,
        )


def get_simulation_service() -> SimulationService:
    return SimulationService(workers=settings.worker_count())
