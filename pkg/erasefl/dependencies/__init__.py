"""
Dependencies package: assembly helpers shared by the CLI commands.
"""

from erasefl.dependencies.experiment import (
    get_simulation_service,
    load_config,
    warn_if_short_packet,
)

__all__ = [
    "get_simulation_service",
    "load_config",
    "warn_if_short_packet",
]
