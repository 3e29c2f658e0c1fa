from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace

import yaml

logger = logging.getLogger("idempotent_dynamics")

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
DEFAULT_CONFIG_PATH = os.path.join(PROJECT_ROOT, "config.yaml")

TOLERANCE_ENV = "IDEMDYN_TOL"
LOG_LEVEL_ENV = "IDEMDYN_LOG_LEVEL"


def load_config(config_path: str = DEFAULT_CONFIG_PATH) -> dict:
    """Read the YAML config and apply environment overrides."""
    with open(config_path, "r") as f:
        config = yaml.safe_load(f) or {}
    return apply_env_overrides(config)


def apply_env_overrides(config: dict, environ=None) -> dict:
    environ = os.environ if environ is None else environ
    tol = environ.get(TOLERANCE_ENV)
    if tol:
        config.setdefault("tolerances", {})["default"] = float(tol)
    level = environ.get(LOG_LEVEL_ENV)
    if level:
        config.setdefault("logging", {})["level"] = level
    return config


@dataclass(frozen=True)
class Tolerances:
    """Numerical cut lines shared by the solvers.

    ``default`` is the trajectory/membership tolerance (IDEMDYN_TOL);
    ``det_relative`` scales with max|M|^n0, ``rank_relative`` with max|M|.
    """

    default: float = 1e-9
    det_relative: float = 1e-9
    rank_relative: float = 1e-9
    unit: float = 1e-9
    measure: float = 1e-12
    coefficient: float = 1e-9

    @classmethod
    def from_config(cls, config: dict) -> "Tolerances":
        section = config.get("tolerances", {}) or {}
        known = {k: float(v) for k, v in section.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def override(self, **values) -> "Tolerances":
        return replace(self, **{k: float(v) for k, v in values.items() if v is not None})
