"""
Service package for the simulator's business logic.
"""

from erasefl.services.channel import ChannelService
from erasefl.services.learning import LocalLearner
from erasefl.services.aggregation import Aggregator
from erasefl.services.simulation import SimulationService

__all__ = [
    "ChannelService",
    "LocalLearner",
    "Aggregator",
    "SimulationService",
]
