"""
Pydantic schemas package for configuration and report validation.
"""

from erasefl.schemas.experiment import (
    ChannelConfig,
    LearnerConfig,
    FeatureConfig,
    DatasetConfig,
    SchemeConfig,
    ExperimentConfig,
    RunConfig,
    SweepSpec,
    SweepConfig,
)
from erasefl.schemas.reports import (
    ErasureProfile,
    LeCamReport,
    FluctuationStats,
    SummaryRow,
    SweepRow,
)

__all__ = [
    "ChannelConfig",
    "LearnerConfig",
    "FeatureConfig",
    "DatasetConfig",
    "SchemeConfig",
    "ExperimentConfig",
    "RunConfig",
    "SweepSpec",
    "SweepConfig",
    "ErasureProfile",
    "LeCamReport",
    "FluctuationStats",
    "SummaryRow",
    "SweepRow",
]
