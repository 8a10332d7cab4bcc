"""Shared state for the pdelaunay command-line application.

This module contains:
- The per-invocation state container (settings, configuration)
- Configuration initialization with CLI > environment > YAML > default precedence
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from pdelaunay.config.loader import ConfigLoader
from pdelaunay.config.schema import PerfectDelaunayConfig
from pdelaunay.config.settings import Settings
from pdelaunay.core.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = "config.yaml"


@dataclass
class AppState:
    """Application state container for one CLI invocation."""

    settings: Settings = field(default_factory=Settings)
    config_loader: Optional[ConfigLoader] = None
    config: PerfectDelaunayConfig = field(default_factory=PerfectDelaunayConfig)

    def node_budget(self, override: Optional[int] = None) -> int:
        if override is not None:
            return override
        if self.settings.node_budget is not None:
            return self.settings.node_budget
        return self.config.oracle.node_budget

    def jobs(self, override: Optional[int] = None) -> int:
        if override is not None:
            return override
        if self.settings.jobs is not None:
            return self.settings.jobs
        return self.config.scan.jobs


def init_app_state(config_path: Optional[str] = None) -> AppState:
    """Load settings and configuration for one invocation.

    An explicit path (flag or PDELAUNAY_CONFIG_PATH) must exist; a missing
    default config.yaml falls back to built-in defaults.

    Raises:
        ConfigError: If settings or the configuration file are invalid
    """
    try:
        settings = Settings()
    except ValidationError as e:
        raise ConfigError(f"Invalid PDELAUNAY_* environment settings: {e}") from e

    path = config_path or settings.config_path
    explicit = config_path is not None or settings.config_path != DEFAULT_CONFIG_PATH
    state = AppState(settings=settings)

    if Path(path).exists() or explicit:
        loader = ConfigLoader(path)
        try:
            loader.load()
        except (FileNotFoundError, ValueError) as e:
            raise ConfigError(str(e), path=path) from e
        state.config_loader = loader
        state.config = loader.model
        logger.debug(f"Loaded configuration from {path}")
    else:
        logger.debug(f"No configuration at {path}, using defaults")

    return state
