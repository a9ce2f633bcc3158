"""Base command interface that all commands must implement"""

from abc import ABC, abstractmethod
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, Dict, Optional

from mapsplit.core.discovery import deep_merge, find_run_config, load_config_file
from mapsplit.core.logger import log_info
from mapsplit.core.run_config import RunConfig


class BaseCommand(ABC):
    """
    Abstract base class for all CLI commands

    Each command must implement:
    - name: Command name (e.g., "count", "chain")
    - help: Short help text
    - description: Detailed description (optional)
    - epilog: Usage examples (optional)
    - add_arguments(): Add command-specific arguments
    - execute(): Run the command logic

    ``execute`` returns True on success. Domain failures are raised as
    MapsplitError and turned into exit codes by the CLI.
    """

    name: str = ""
    help: str = ""
    description: Optional[str] = None
    epilog: Optional[str] = None

    @abstractmethod
    def add_arguments(self, parser: ArgumentParser):
        """
        Add command-specific arguments to the parser

        Args:
            parser: ArgumentParser to add arguments to
        """
        pass

    @abstractmethod
    def execute(self, args: Namespace) -> bool:
        """
        Execute the command

        Args:
            args: Parsed command-line arguments

        Returns:
            True if command executed successfully, False otherwise
        """
        pass

    def get_description(self) -> str:
        """Get command description (fallback to help if not set)"""
        return self.description or self.help

    def get_epilog(self) -> Optional[str]:
        """Get command epilog"""
        return self.epilog

    # ========================================================================
    # Shared arguments
    # ========================================================================

    @staticmethod
    def add_data_arguments(parser: ArgumentParser):
        """Input data and pruning flags (override the config file)"""
        group = parser.add_argument_group("data")
        group.add_argument("--units", type=Path, help="Unit table (.csv or .geojson)")
        group.add_argument("--adjacency", type=Path, help="Shared-border table (.csv)")
        group.add_argument("--elections", type=Path, help="Extra vote columns keyed by unit_id")
        group.add_argument(
            "--no-prune", action="store_true", help="Keep every border as a contiguity edge"
        )
        group.add_argument("--min-length", type=float, help="Pruning length threshold (km)")
        group.add_argument("--min-fraction", type=float, help="Pruning perimeter-share threshold")
        group.add_argument("--output", "-o", type=Path, help="Output directory")

    @staticmethod
    def add_constraint_arguments(parser: ArgumentParser):
        group = parser.add_argument_group("constraints")
        group.add_argument(
            "--max-pop-dev", type=float, help="Keep plans with population deviation below this"
        )
        group.add_argument("--max-er", type=int, help="Keep plans with fewer edges removed")

    # ========================================================================
    # Configuration
    # ========================================================================

    def config_overrides(self, args: Namespace) -> Dict[str, Any]:
        """
        Mapping built from the flags that were given. Paths are made absolute
        so they keep meaning relative to the working directory.
        """

        def path(value):
            return str(Path(value).expanduser().resolve()) if value is not None else None

        overrides: Dict[str, Any] = {}

        def put(section: str, key: str, value):
            if value is not None:
                overrides.setdefault(section, {})[key] = value

        put("data", "units", path(getattr(args, "units", None)))
        put("data", "adjacency", path(getattr(args, "adjacency", None)))
        put("data", "elections", path(getattr(args, "elections", None)))
        if getattr(args, "no_prune", False):
            put("graph", "prune", False)
        put("graph", "min_length", getattr(args, "min_length", None))
        put("graph", "min_fraction", getattr(args, "min_fraction", None))
        put("constraints", "max_pop_dev", getattr(args, "max_pop_dev", None))
        put("constraints", "max_er", getattr(args, "max_er", None))
        if getattr(args, "output", None) is not None:
            overrides["output"] = path(args.output)
        return overrides

    def load_run_config(self, args: Namespace) -> RunConfig:
        """
        File settings (``--config``, MAPSPLIT_CONFIG or the nearest
        mapsplit.yaml) with flag overrides merged on top.

        Raises:
            ConfigError: Missing or invalid settings
        """
        source = find_run_config(getattr(args, "config", None))
        data: Dict[str, Any] = {}
        base_dir = Path.cwd()
        if source is not None:
            log_info(f"Config: {source}")
            data = load_config_file(source)
            base_dir = source.parent
        merged = deep_merge(data, self.config_overrides(args))
        return RunConfig.from_mapping(merged, mode=self.name, base_dir=base_dir, source=source)
