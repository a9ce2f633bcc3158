"""
Enumerate command - stream every plan meeting the constraints to a plan file
"""

import time
from argparse import ArgumentParser, Namespace

from mapsplit import config
from mapsplit.commands.base import BaseCommand
from mapsplit.core.emojis import Emoji
from mapsplit.core.enumeration import enumerate_plans
from mapsplit.core.logger import log_header, log_info, log_success, log_warning, print_summary
from mapsplit.core.pipeline import load_graph
from mapsplit.core.plans import PlanWriter, Provenance
from mapsplit.core.reports import manifest, write_json, write_text
from mapsplit.core.stats import stats


class EnumerateCommand(BaseCommand):
    """Write all plans to plans.pbm1"""

    name = "enumerate"
    help = "Write every plan meeting the constraints to a plan file"
    description = (
        "Materialises the plans that 'count' counts. Use constraints tight enough "
        "for the result to fit on disk; the unconstrained set of a 57-county map "
        "has hundreds of millions of plans."
    )
    epilog = """Examples:
  mapsplit enumerate --max-pop-dev 0.03 --max-er 22
  mapsplit enumerate --max-pop-dev 0.03 --max-er 12 -o results/er12
"""

    def add_arguments(self, parser: ArgumentParser):
        self.add_data_arguments(parser)
        self.add_constraint_arguments(parser)

    def execute(self, args: Namespace) -> bool:
        log_header("ENUMERATE PLANS")
        cfg = self.load_run_config(args)
        _, graph = load_graph(cfg)
        if cfg.constraints.is_empty:
            log_warning("No constraints set: every contiguous plan will be written")

        started = time.time()
        plans_path = cfg.output / config.PLANS_FILE
        log_info(f"{Emoji.FLOPPY} Writing {plans_path}")
        with PlanWriter(plans_path, graph, Provenance.ENUMERATED) as writer:
            emitted = enumerate_plans(
                graph,
                cfg.constraints,
                writer,
                progress=lambda n: log_info(f"{n:,} plans written"),
                progress_every=config.PROGRESS_EVERY,
            )
        finished = time.time()
        stats.add("plans", emitted)

        print(emitted)
        write_text(cfg.output / config.COUNT_FILE, f"{emitted}\n")
        write_json(
            cfg.output / config.MANIFEST_FILE,
            manifest(
                command=self.name,
                config_echo=cfg.raw,
                graph=graph.describe(),
                results={"plans": emitted, "unique": emitted, "plans_file": config.PLANS_FILE},
                started=started,
                finished=finished,
            ),
        )
        log_success(f"{emitted:,} plans written", finished - started)
        print_summary()
        return True
