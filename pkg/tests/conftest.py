import json
from pathlib import Path

import pytest

from koopman.config import ExperimentConfig

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def benchmark_config_dict() -> dict:
    return json.loads((REPO_ROOT / "paper.json").read_text())


@pytest.fixture(scope="session")
def benchmark_config(benchmark_config_dict) -> ExperimentConfig:
    return ExperimentConfig.model_validate(benchmark_config_dict)


@pytest.fixture()
def small_config_dict(benchmark_config_dict) -> dict:
    """The benchmark config shrunk for fast unit tests."""
    cfg = json.loads(json.dumps(benchmark_config_dict))
    cfg["monte_carlo_count"] = 2
    cfg["sigma_t_scenarios"] = [0.0, 0.2]
    cfg["grid"]["points"] = 40
    cfg["rho_grid"] = [0.2, 0.5, 1.0]
    return cfg


@pytest.fixture()
def small_config(small_config_dict) -> ExperimentConfig:
    return ExperimentConfig.model_validate(small_config_dict)
