"""
Pytest configuration and fixtures for testing.
"""

from pathlib import Path
from typing import Callable

import numpy as np
import pytest
import yaml
from click.testing import CliRunner

from erasefl.config import settings
from erasefl.models.learning import Dataset, FeatureBasis, FeatureMap
from erasefl.schemas.experiment import ExperimentConfig, SchemeConfig


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for a single test."""
    return np.random.default_rng(12345)


@pytest.fixture
def feature_map() -> FeatureMap:
    """Quadratic monomial features."""
    return FeatureMap(degree=2, basis=FeatureBasis.MONOMIAL)


@pytest.fixture
def small_datasets(rng, feature_map) -> list[Dataset]:
    """Three users on disjoint unit intervals, five samples each."""
    datasets = []
    for u in range(3):
        x = rng.uniform(u, u + 1, 5)
        datasets.append(Dataset(x=x, y=x ** 2 + rng.normal(0, 1, 5), feature_map=feature_map))
    return datasets


@pytest.fixture
def make_experiment() -> Callable[..., ExperimentConfig]:
    """
    Factory for small experiment configs.

    Keyword arguments override top-level fields; `channel`, `learner` and
    `features` are merged into the defaults.
    """
    def factory(kind: str = "no_memory", memory_depth: int = 1, **overrides) -> ExperimentConfig:
        data = {
            "name": "test",
            "num_users": 4,
            "dataset": {"samples_per_user": 20},
            "features": {"degree": 2},
            "learner": {"eta": 0.05, "local_iterations": 1},
            "channel": {"gamma0_db": 3.0, "k_bits": 100, "rate": 0.9},
            "num_rounds": 30,
            "replicas": 3,
            "base_seed": 7,
        }
        for section in ("channel", "learner", "features", "dataset"):
            if section in overrides:
                data[section] = {**data[section], **overrides.pop(section)}
        data.update(overrides)
        scheme = SchemeConfig(kind=kind, memory_depth=memory_depth)
        return ExperimentConfig(**data, scheme=scheme)

    return factory


@pytest.fixture
def write_config(tmp_path) -> Callable[[dict | str], Path]:
    """Write a config mapping (as YAML) or raw text into a temp file."""
    def writer(content: dict | str, name: str = "config.yaml") -> Path:
        path = tmp_path / name
        text = content if isinstance(content, str) else yaml.safe_dump(content, sort_keys=False)
        path.write_text(text, encoding="utf-8")
        return path

    return writer


@pytest.fixture
def run_file() -> dict:
    """Minimal run file with two schemes."""
    return {
        "name": "cli",
        "num_users": 3,
        "dataset": {"samples_per_user": 10},
        "channel": {"gamma0_db": 3.0, "k_bits": 100, "rate": 0.9},
        "num_rounds": 5,
        "replicas": 2,
        "base_seed": 3,
        "schemes": [{"kind": "no_memory"}, {"kind": "per_user_memory"}],
    }


@pytest.fixture
def runner(monkeypatch) -> CliRunner:
    """Click test runner with a single worker."""
    monkeypatch.setattr(settings, "threads", 1)
    return CliRunner()
