"""
Command auto-discovery system

This module automatically discovers and registers all command classes in the commands/ directory.
To add a new command, simply create a new file with a class that inherits from BaseCommand.
"""

import importlib
import inspect
from pathlib import Path
from typing import Dict, List, Type

from mapsplit.commands.base import BaseCommand
from mapsplit.core.logger import log_warning


def discover_commands() -> Dict[str, Type[BaseCommand]]:
    """
    Automatically discover all command classes in the commands directory

    Returns:
        Dictionary mapping command names to command classes
    """
    commands = {}
    commands_dir = Path(__file__).parent

    for file_path in sorted(commands_dir.glob("*.py")):
        # Skip __init__.py and base.py
        if file_path.stem in ("__init__", "base"):
            continue

        try:
            module = importlib.import_module(f"mapsplit.commands.{file_path.stem}")
        except Exception as e:
            log_warning(f"Failed to load command from {file_path.name}: {e}")
            continue

        for _, obj in inspect.getmembers(module, inspect.isclass):
            if (
                issubclass(obj, BaseCommand)
                and obj is not BaseCommand
                and obj.__module__ == module.__name__
                and getattr(obj, "name", "")
            ):
                commands[obj.name] = obj

    return commands


def get_command_names() -> List[str]:
    """
    Get list of all available command names

    Returns:
        Sorted list of command names
    """
    return sorted(discover_commands().keys())


def get_command(name: str) -> Type[BaseCommand]:
    """
    Get a specific command class by name

    Raises:
        KeyError: If command not found
    """
    commands = discover_commands()
    if name not in commands:
        raise KeyError(
            f"Command '{name}' not found. Available commands: {', '.join(sorted(commands))}"
        )
    return commands[name]
