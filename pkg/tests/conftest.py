import numpy as np
import pytest
import yaml

from src.core.matrix import Matrix
from src.reports.matrix_file import write_matrix_file
from tests.mocks import operators


@pytest.fixture
def config():
    """Default test configuration."""
    return {
        "tolerances": {
            "default": 1e-9,
            "det_relative": 1e-9,
            "rank_relative": 1e-9,
            "unit": 1e-9,
            "measure": 1e-12,
            "coefficient": 1e-9,
        },
        "dynamics": {
            "default_steps": 200,
            "saturation_floor": -1e300,
            "divergence_threshold": -1e8,
            "divergence_window": 100,
            "stable_window": 10,
            "stable_periods": 10,
        },
        "spectrum": {
            "gelfand_power": 64,
            "gelfand_tolerance": 1e-2,
            "max_sweeps": 10000,
            "max_dimension": 32,
        },
        "graph": {"cycle_enumeration_limit": 12},
        "campaign": {
            "cases": 20,
            "steps": 300,
            "seed": 7,
            "workers": 1,
            "unit_cycle_probability": 0.5,
            "neg_inf_probability": 0.0,
        },
        "logging": {
            "level": "WARNING",
            "file_path": "",
            "max_file_size_mb": 1,
            "backup_count": 1,
        },
    }


@pytest.fixture
def config_file(config, tmp_path):
    """Write config to a temporary YAML file."""
    config_path = tmp_path / "config.yaml"
    with open(config_path, "w") as f:
        yaml.dump(config, f)
    return str(config_path)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def matrix_path(tmp_path):
    """Factory writing a Matrix (or nested rows) to a temporary matrix file."""
    counter = {"k": 0}

    def _write(A) -> str:
        if not isinstance(A, Matrix):
            A = Matrix.from_rows(A)
        counter["k"] += 1
        path = tmp_path / f"matrix_{counter['k']}.yaml"
        write_matrix_file(str(path), A)
        return str(path)

    return _write


@pytest.fixture
def cycle_table():
    return operators.cycle_table(1.0, 1.0, 1.0)


@pytest.fixture
def contracting_row():
    return operators.single_zero_row(0.5, 0.3)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the full-size campaigns")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size random campaign, skipped unless --runslow is given")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
