"""
Domain entities package.
Runtime numeric types shared by the services.
"""

from erasefl.models.channel import (
    Regime,
    LinkBudget,
    FadingDraw,
    Transmission,
    blocklength,
    db_to_linear,
    linear_to_db,
)
from erasefl.models.learning import FeatureBasis, FeatureMap, Dataset
from erasefl.models.aggregation import SchemeKind, AggregatorState, RoundReception
from erasefl.models.analysis import Pmf, Outcome
from erasefl.models.simulation import RoundLog, MonteCarloResult

__all__ = [
    "Regime",
    "LinkBudget",
    "FadingDraw",
    "Transmission",
    "blocklength",
    "db_to_linear",
    "linear_to_db",
    "FeatureBasis",
    "FeatureMap",
    "Dataset",
    "SchemeKind",
    "AggregatorState",
    "RoundReception",
    "Pmf",
    "Outcome",
    "RoundLog",
    "MonteCarloResult",
]
