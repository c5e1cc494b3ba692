"""Config-driven experiment runner and command line."""

from .config import KINDS, ConfigError, ExperimentConfig, load_config, parse_config
from .report import ExperimentReport, MissingWitnessError
from .runner import list_registry, run

__all__ = [
    "ConfigError", "ExperimentConfig", "ExperimentReport", "KINDS", "MissingWitnessError",
    "list_registry", "load_config", "parse_config", "run",
]
