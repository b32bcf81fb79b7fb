"""Experiment parameters and verdict thresholds, loaded from the JSON config."""

import json
from pathlib import Path

from src.config import EXPERIMENT_CONFIG_FILE
from src.errors import FormatError


def load_experiment_config(config_path: Path | None = None) -> dict:
    """Load every experiment section from the JSON configuration file."""
    config_file = EXPERIMENT_CONFIG_FILE if config_path is None else Path(config_path)

    with open(config_file, "r", encoding="utf-8") as f:
        return json.load(f)


def get_experiment_config(name: str, config_path: Path | None = None) -> dict:
    """Parameters of one experiment (``tree_suite``, ``nazarov``, ...)."""
    config = load_experiment_config(config_path)
    if name not in config:
        raise FormatError(f"No section '{name}' in the experiment configuration")
    return dict(config[name])
