"""
Count command - exact number of contiguous two-district plans
"""

import time
from argparse import ArgumentParser, Namespace

from mapsplit import config
from mapsplit.commands.base import BaseCommand
from mapsplit.core.emojis import Emoji
from mapsplit.core.enumeration import count_plans
from mapsplit.core.logger import log_header, log_info, log_success, print_summary
from mapsplit.core.pipeline import load_graph
from mapsplit.core.reports import write_text
from mapsplit.core.stats import stats


class CountCommand(BaseCommand):
    """Count plans without materialising them"""

    name = "count"
    help = "Print the exact number of plans meeting the constraints"
    description = (
        "Counts every split of the map into two contiguous districts, optionally "
        "restricted by population deviation and edges removed. The count is printed "
        "on stdout and written to count.txt."
    )
    epilog = """Examples:
  mapsplit count                                   # settings from mapsplit.yaml
  mapsplit count --max-pop-dev 0.03                # population-balanced plans only
  mapsplit count --max-pop-dev 0.03 --max-er 22    # balanced and compact
  mapsplit count --units u.csv --adjacency a.csv --no-prune
"""

    def add_arguments(self, parser: ArgumentParser):
        self.add_data_arguments(parser)
        self.add_constraint_arguments(parser)

    def execute(self, args: Namespace) -> bool:
        log_header("COUNT PLANS")
        cfg = self.load_run_config(args)
        _, graph = load_graph(cfg)

        log_info(f"{Emoji.COUNT} Constraints: {cfg.constraints.to_dict()}")
        started = time.time()
        total = count_plans(graph, cfg.constraints)
        stats.add("plans", total)

        print(total)
        path = write_text(cfg.output / config.COUNT_FILE, f"{total}\n")
        log_success(f"{total:,} plans (written to {path})", time.time() - started)
        print_summary()
        return True
