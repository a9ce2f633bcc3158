"""
Run-config discovery for mapsplit

Finds the run configuration file, loads it and merges command-line
overrides onto it.
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from mapsplit.config import CONFIG_ENV_VAR, CONFIG_FILE_NAME
from mapsplit.core.errors import ConfigError

MAX_MERGE_DEPTH = 10


def find_run_config(
    explicit: Optional[Path] = None, start_path: Optional[Path] = None
) -> Optional[Path]:
    """
    Locate the run configuration file.

    Priority:
    1. ``explicit`` (the --config flag)
    2. MAPSPLIT_CONFIG environment variable
    3. mapsplit.yaml in the start directory or any parent

    Args:
        explicit: Path given on the command line
        start_path: Directory to start searching from (defaults to current directory)

    Returns:
        Path to the config file, or None if there is none

    Raises:
        ConfigError: An explicitly named file does not exist
    """
    # Priority 1: flag
    if explicit is not None:
        path = Path(explicit).resolve()
        if not path.is_file():
            raise ConfigError(f"config file not found: {explicit}")
        return path

    # Priority 2: environment variable
    env_path = os.getenv(CONFIG_ENV_VAR)
    if env_path:
        path = Path(env_path).resolve()
        if not path.is_file():
            raise ConfigError(f"{CONFIG_ENV_VAR} points to a missing file: {env_path}")
        return path

    # Priority 3: search upward
    if start_path is None:
        start_path = Path.cwd()
    current = start_path.resolve()
    while True:
        candidate = current / CONFIG_FILE_NAME
        if candidate.is_file():
            return candidate
        parent = current.parent
        if parent == current:
            return None
        current = parent


def load_config_file(path: Path) -> Dict[str, Any]:
    """
    Load a YAML run configuration with detailed error messages.

    Raises:
        ConfigError: Missing file, invalid YAML, or a non-mapping document
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        if hasattr(e, "problem_mark"):
            mark = e.problem_mark
            raise ConfigError(
                f"Invalid YAML in {path.name} at line {mark.line + 1}, "
                f"column {mark.column + 1}:\n  {e.problem}"
            ) from None
        raise ConfigError(f"Invalid YAML in {path.name}: {e}") from None

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path.name} must contain a mapping, got {type(data).__name__}")
    return data


def deep_merge(base: Dict[str, Any], override: Dict[str, Any], depth: int = 0) -> Dict[str, Any]:
    """
    Recursive merge where ``override`` wins.

    Rules:
    1. Both values dicts -> merge recursively
    2. Any other pair (lists included) -> override replaces
    3. Override value None -> the key is removed
    4. Keys only in base are kept; keys only in override are added

    Raises:
        ConfigError: Nesting deeper than MAX_MERGE_DEPTH
    """
    if depth > MAX_MERGE_DEPTH:
        raise ConfigError(f"Max merge depth ({MAX_MERGE_DEPTH}) exceeded")

    result = dict(base)
    for key, override_value in override.items():
        if override_value is None:
            result.pop(key, None)
            continue
        base_value = result.get(key)
        if isinstance(base_value, dict) and isinstance(override_value, dict):
            result[key] = deep_merge(base_value, override_value, depth + 1)
        else:
            result[key] = override_value
    return result
