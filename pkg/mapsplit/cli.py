#!/usr/bin/env python3
"""
Main CLI entry point for mapsplit

This file orchestrates the command-line interface using the auto-discovery system.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from mapsplit.cli_builder import CLIContext, create_cli_context
from mapsplit.config import PROJECT_NAME, PROJECT_VERSION
from mapsplit.core.colors import Colors
from mapsplit.core.errors import MapsplitError
from mapsplit.core.logger import log_error, log_warning, set_quiet
from mapsplit.core.stats import stats


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns the process exit code"""
    ctx = create_cli_context()
    if not ctx.commands:
        log_error("No commands found. Please create command files in commands/")
        return 1

    parser, command_instances = build_parser(ctx)
    args = parser.parse_args(argv)

    if args.no_color:
        Colors.disable()
    else:
        Colors.auto_disable()
    set_quiet(args.quiet)
    stats.reset()

    try:
        success = command_instances[args.command].execute(args)
        return 0 if success else 1
    except MapsplitError as e:
        log_error(str(e))
        if args.debug:
            raise
        return e.exit_code
    except KeyboardInterrupt:
        print(f"\n{Colors.YELLOW}Operation cancelled by user{Colors.RESET}", file=sys.stderr)
        return 130
    except Exception as e:
        log_error(f"Unexpected error: {e}")
        if args.debug:
            raise
        return 1


def build_parser(ctx: CLIContext):
    """Main parser with one subparser per discovered command"""
    if ctx.config_error:
        log_warning(ctx.config_error)
    found = f"Run config: {ctx.config_path}" if ctx.has_config else "No mapsplit.yaml found"
    parser = argparse.ArgumentParser(
        prog=PROJECT_NAME,
        description="  mapsplit - exact enumeration and ReCom sampling of two-district plans",
        epilog=found,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )

    # Global options
    parser.add_argument("--version", action="version", version=f"%(prog)s {PROJECT_VERSION}")
    parser.add_argument("--config", type=Path, help="Run config file (default: discovered)")
    parser.add_argument("--no-color", action="store_true", help="Disable colored output")
    parser.add_argument("--quiet", "-q", action="store_true", help="Only print warnings and errors")
    parser.add_argument("--debug", action="store_true", help="Show tracebacks")

    subparsers = parser.add_subparsers(dest="command", help="Available commands", required=True)

    command_instances = {}
    for cmd_name, cmd_class in sorted(ctx.commands.items()):
        cmd_instance = cmd_class()
        command_instances[cmd_name] = cmd_instance

        cmd_parser = subparsers.add_parser(
            cmd_name,
            help=cmd_instance.help,
            description=cmd_instance.get_description(),
            epilog=cmd_instance.get_epilog(),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        cmd_instance.add_arguments(cmd_parser)

    return parser, command_instances


if __name__ == "__main__":
    sys.exit(main())
