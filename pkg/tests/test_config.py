import logging

import pytest

from src.utils.config import DEFAULT_CONFIG_PATH, Tolerances, apply_env_overrides, load_config
from src.utils.logger import setup_logger


@pytest.fixture
def clean_logger():
    logger = logging.getLogger("idempotent_dynamics")
    saved = list(logger.handlers)
    logger.handlers.clear()
    yield logger
    for handler in logger.handlers:
        handler.close()
    logger.handlers[:] = saved


class TestLoadConfig:
    def test_reads_yaml(self, config_file):
        config = load_config(config_file)
        assert config["campaign"]["seed"] == 7
        assert config["tolerances"]["default"] == 1e-9

    def test_shipped_config(self):
        config = load_config(DEFAULT_CONFIG_PATH)
        assert {"tolerances", "dynamics", "spectrum", "graph", "campaign", "logging"} <= set(config)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_config(str(tmp_path / "absent.yaml"))

    def test_env_overrides(self, monkeypatch, config_file):
        monkeypatch.setenv("IDEMDYN_TOL", "1e-6")
        monkeypatch.setenv("IDEMDYN_LOG_LEVEL", "DEBUG")
        config = load_config(config_file)
        assert config["tolerances"]["default"] == 1e-6
        assert config["logging"]["level"] == "DEBUG"

    def test_explicit_environ(self):
        config = apply_env_overrides({}, environ={"IDEMDYN_TOL": "0.001"})
        assert config == {"tolerances": {"default": 0.001}}
        assert apply_env_overrides({"a": 1}, environ={}) == {"a": 1}


class TestTolerances:
    def test_defaults(self):
        assert Tolerances().default == 1e-9
        assert Tolerances.from_config({}) == Tolerances()

    def test_from_config_ignores_unknown_keys(self):
        tolerances = Tolerances.from_config({"tolerances": {"unit": "1e-3", "bogus": 4}})
        assert tolerances.unit == 1e-3
        assert not hasattr(tolerances, "bogus")

    def test_override_skips_none(self):
        tolerances = Tolerances().override(default=1e-4, unit=None)
        assert tolerances.default == 1e-4
        assert tolerances.unit == 1e-9


class TestLogger:
    def test_console_only(self, clean_logger, config):
        logger = setup_logger(config)
        assert logger is clean_logger
        assert logger.level == logging.WARNING
        assert len(logger.handlers) == 1

    def test_rotating_file(self, clean_logger, config, tmp_path):
        config["logging"]["file_path"] = str(tmp_path / "logs" / "idemdyn.log")
        config["logging"]["level"] = "info"
        logger = setup_logger(config)
        assert logger.level == logging.INFO
        assert len(logger.handlers) == 2
        assert (tmp_path / "logs").is_dir()

    def test_idempotent(self, clean_logger, config):
        setup_logger(config)
        setup_logger(config)
        assert len(clean_logger.handlers) == 1
