"""pdelaunay configuration loader."""

from pdelaunay.config.loader import ConfigLoader
from pdelaunay.config.schema import PerfectDelaunayConfig
from pdelaunay.config.settings import Settings

__all__ = ["ConfigLoader", "PerfectDelaunayConfig", "Settings"]
