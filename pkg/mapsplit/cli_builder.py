"""
CLI context builder for mapsplit

Detects the run configuration file and discovers the available commands
before arguments are parsed.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Type

from mapsplit.commands.base import BaseCommand
from mapsplit.core.discovery import find_run_config
from mapsplit.core.errors import ConfigError


@dataclass
class CLIContext:
    """
    Context information for CLI execution

    Attributes:
        config_path: Run config found by discovery (None if there is none)
        config_error: Why discovery failed, if it did
        commands: Dictionary of available commands
    """

    config_path: Optional[Path]
    commands: Dict[str, Type[BaseCommand]]
    config_error: Optional[str] = None

    @property
    def has_config(self) -> bool:
        return self.config_path is not None


def _discover_commands() -> Dict[str, Type[BaseCommand]]:
    from mapsplit.commands import discover_commands

    return discover_commands()


def create_cli_context(start_path: Optional[Path] = None) -> CLIContext:
    """
    Create CLI context by locating the run config and discovering commands

    A broken MAPSPLIT_CONFIG does not stop the CLI from starting; the error is
    kept and reported by the command that needs the file.
    """
    try:
        config_path = find_run_config(start_path=start_path)
        error = None
    except ConfigError as e:
        config_path, error = None, str(e)
    return CLIContext(config_path=config_path, commands=_discover_commands(), config_error=error)
