#!/usr/bin/env python3
"""
Configuration for wardrop-kit.

Values come from config.json at the repository root, optionally overlaid by a
user file (JSON or YAML) and by the WARDROP_KIT_THREADS environment variable.
"""

import copy
import json
import logging
import os
from typing import Any, Dict, Optional

import yaml

logger = logging.getLogger(__name__)

CONFIG_PATH = os.path.join(os.path.dirname(__file__), '..', '..', 'config.json')
THREADS_ENV = "WARDROP_KIT_THREADS"

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "solver": {
        "gap_tol": 1e-8,
        "max_iter": 200000,
        "variant": "pairwise",
        "stall_sweeps": 50,
        "floor_gap": 1e-10,
        "line_search_iter": 60,
        "eps0": 1e-2,
        "decay": 0.25,
        "load_tol": 1e-7,
        "max_rungs": 12,
        "tol_active": 1e-6,
    },
    "singleton": {"tie_tol": 1e-6, "water_fill_tol": 1e-12},
    "diagnostics": {
        "monotonicity_slack": 1e-6,
        "operator_slack": 1e-6,
        "comonotone_slack": 1e-8,
        "wardrop_tol": 1e-6,
    },
    "composer": {"max_strategies": 100000, "embed_mode": "auto"},
    "runtime": {"threads": 1, "log_level": "WARNING"},
}


def _merge(base: Dict[str, Any], overlay: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in (overlay or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def read_config_file(path: str) -> Dict[str, Any]:
    """Read a JSON or YAML config file (chosen by extension)."""
    with open(path, "r", encoding="utf-8") as f:
        if path.endswith((".yml", ".yaml")):
            data = yaml.safe_load(f) or {}
        else:
            data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: top level must be a mapping")
    return data


config = copy.deepcopy(DEFAULTS)
try:
    config = _merge(DEFAULTS, read_config_file(CONFIG_PATH))
except FileNotFoundError:
    logger.warning("config.json not found, using built-in defaults")


def use_config_file(path: str) -> Dict[str, Any]:
    """Overlay a user config file on the active configuration."""
    global config
    config = _merge(config, read_config_file(path))
    logger.debug("loaded configuration overrides from %s", path)
    return config


def get_section(name: str) -> Dict[str, Any]:
    return dict(config.get(name, {}))


def get_value(section: str, key: str, default: Optional[Any] = None) -> Any:
    return config.get(section, {}).get(key, default)


def thread_count() -> int:
    """Worker cap for sweeps: WARDROP_KIT_THREADS wins over runtime.threads."""
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            logger.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
    return max(1, int(get_value("runtime", "threads", 1)))
