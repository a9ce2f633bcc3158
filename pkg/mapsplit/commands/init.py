"""
Init command - write a starter mapsplit.yaml
"""

from argparse import ArgumentParser, Namespace
from pathlib import Path

from mapsplit.commands.base import BaseCommand
from mapsplit.config import (
    CONFIG_FILE_NAME,
    DEFAULT_HISTOGRAM_BINS,
    DEFAULT_MAX_TREE_RETRIES,
    DEFAULT_PRUNE_MIN_FRACTION,
    DEFAULT_PRUNE_MIN_LENGTH_KM,
    OUTPUT_DIR,
    PLANS_FILE,
)
from mapsplit.core.logger import log_error, log_info, log_section, log_success

STARTER_CONFIG = f"""\
# mapsplit run configuration
# Relative paths resolve against this file's directory.

data:
  units: data/units.csv            # unit_id, population, area_km2, perimeter_km, bbox_*
  adjacency: data/adjacency.csv    # unit_a, unit_b, shared_perimeter_km
  # elections: data/elections.csv  # unit_id, <contest>_dem, <contest>_rep[, <contest>_ind]

graph:
  prune: true
  min_length: {DEFAULT_PRUNE_MIN_LENGTH_KM}
  min_fraction: {DEFAULT_PRUNE_MIN_FRACTION}

constraints:
  max_pop_dev: 0.03                # exclusive bound
  max_er: 22                       # exclusive bound

chain:
  steps: 100000
  rng_seed: 2023
  seeds: []                        # .pbm1 or unit_id,district CSV files
  # random_seeds: {{from: {OUTPUT_DIR}/{PLANS_FILE}, count: 4}}
  accept:
    policy: always                 # or: threshold (with inner + fallback_prob)
  max_tree_retries: {DEFAULT_MAX_TREE_RETRIES}
  threads: 1

analysis:
  plans: {OUTPUT_DIR}/{PLANS_FILE}
  # reference_plan: data/adopted.csv
  contests: []                     # empty = every contest in the data
  modes: [two_party]
  bins: {DEFAULT_HISTOGRAM_BINS}

output: {OUTPUT_DIR}
"""


class InitCommand(BaseCommand):
    """Write a starter run configuration"""

    name = "init"
    help = f"Write a starter {CONFIG_FILE_NAME} in the current directory"
    description = f"Creates a commented {CONFIG_FILE_NAME} listing every setting with its default"
    epilog = f"""Examples:
  mapsplit init            # create {CONFIG_FILE_NAME}
  mapsplit init --force    # overwrite an existing one
"""

    def add_arguments(self, parser: ArgumentParser):
        parser.add_argument(
            "--force",
            action="store_true",
            help=f"Overwrite an existing {CONFIG_FILE_NAME}",
        )

    def execute(self, args: Namespace) -> bool:
        log_section("INITIALIZING MAPSPLIT RUN")

        target = Path.cwd() / CONFIG_FILE_NAME
        if target.exists() and not args.force:
            log_error(f"{CONFIG_FILE_NAME} already exists in this directory")
            log_info("Use --force to overwrite it")
            return False

        target.write_text(STARTER_CONFIG, encoding="utf-8")
        log_success(f"Created {CONFIG_FILE_NAME}")
        log_info("Next steps:")
        log_info("  1. Point data.units and data.adjacency at your unit tables")
        log_info("  2. Run 'mapsplit borders' to review pruning")
        log_info("  3. Run 'mapsplit count' for the number of plans")
        return True
