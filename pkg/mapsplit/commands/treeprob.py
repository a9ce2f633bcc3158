"""
Treeprob command - proposal probability of each ER score under one tree draw
"""

import time
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, Dict

from mapsplit import config
from mapsplit.commands.base import BaseCommand
from mapsplit.core.emojis import Emoji
from mapsplit.core.logger import log_header, log_info, log_success, print_summary
from mapsplit.core.pipeline import load_ensemble, load_graph
from mapsplit.core.reports import treeprob_frame, write_frame
from mapsplit.core.stats import stats
from mapsplit.core.trees import proposal_distribution


class TreeprobCommand(BaseCommand):
    """Exact sp(P)-proportional proposal distribution over a plan set"""

    name = "treeprob"
    help = "Probability that a tree draw proposes each ER score, over a plan file"
    description = (
        "Weights each plan P by the number of (spanning tree, cut edge) pairs that "
        "produce it, sp(P) = sp(V0) * sp(V1) * ER(P), normalised over the plan set, "
        "and totals the weights per ER score. Writes treeprob.csv."
    )
    epilog = """Examples:
  mapsplit treeprob --plans results/plans.pbm1
"""

    def add_arguments(self, parser: ArgumentParser):
        self.add_data_arguments(parser)
        parser.add_argument("--plans", type=Path, help="Enumerated plan file (.pbm1)")

    def config_overrides(self, args: Namespace) -> Dict[str, Any]:
        overrides = super().config_overrides(args)
        if args.plans is not None:
            overrides["analysis"] = {"plans": str(args.plans.expanduser().resolve())}
        return overrides

    def execute(self, args: Namespace) -> bool:
        log_header("TREE PROPOSAL PROBABILITIES")
        cfg = self.load_run_config(args)
        _, graph = load_graph(cfg)
        ensemble = load_ensemble(cfg, graph)

        started = time.time()
        dist = proposal_distribution(graph, ensemble.unique)
        stats.add("plans", len(dist.per_plan))

        frame = treeprob_frame(dist)
        path = write_frame(cfg.output / config.TREEPROB_FILE, frame)
        for row in dist.rows()[:3]:
            log_info(
                f"{Emoji.TREE} ER {row['er_score']}: p={row['probability']:.4g} "
                f"({row['num_plans']} plans)"
            )
        log_success(f"{len(frame)} ER scores written to {path}", time.time() - started)
        print_summary()
        return True
