"""
Core utilities for mapsplit
"""

from mapsplit.core.discovery import deep_merge, find_run_config, load_config_file
from mapsplit.core.errors import ConfigError, DataError, MapsplitError

__all__ = [
    "find_run_config",
    "load_config_file",
    "deep_merge",
    "MapsplitError",
    "DataError",
    "ConfigError",
]
