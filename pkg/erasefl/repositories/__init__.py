"""
Repository package for config files and result files.
"""

from erasefl.repositories.config import ConfigRepository
from erasefl.repositories.results import ResultRepository

__all__ = [
    "ConfigRepository",
    "ResultRepository",
]
