"""Environment settings (PDELAUNAY_* variables)."""
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-level settings read from the environment.

    Values here override config.yaml; CLI flags override both.
    """

    model_config = SettingsConfigDict(env_prefix="PDELAUNAY_", extra="ignore")

    config_path: str = Field(default="config.yaml", description="Path to the YAML configuration")
    jobs: Optional[int] = Field(default=None, gt=0, description="Default scan worker count")
    node_budget: Optional[int] = Field(default=None, gt=0, description="Oracle node budget")
    log_level: str = Field(default="INFO", description="Logging level")
