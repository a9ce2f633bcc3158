"""
Chain command - sample plans with the two-district ReCom chain
"""

import time
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, Dict

from mapsplit import config
from mapsplit.commands.base import BaseCommand
from mapsplit.core.emojis import Emoji
from mapsplit.core.logger import log_header, log_info, log_success, print_summary
from mapsplit.core.pipeline import chain_config, load_graph
from mapsplit.core.plans import write_plans
from mapsplit.core.recom import PRESETS, run_chain
from mapsplit.core.reports import manifest, write_json
from mapsplit.core.stats import stats


class ChainCommand(BaseCommand):
    """Run ReCom chains from one or more seed plans"""

    name = "chain"
    help = "Sample an ensemble with the ReCom Markov chain"
    description = (
        "Runs one chain per seed plan. Each step draws a uniform spanning tree of the "
        "map and cuts a population-balanced edge; rejected proposals repeat the current "
        "plan, so the plan file always holds exactly 'steps' plans."
    )
    epilog = """Examples:
  mapsplit chain --steps 100000 --rng-seed 7 --seed data/adopted.csv --preset ensemble2
  mapsplit chain --preset ensemble4 --seed data/adopted.csv --random-seeds-from results/plans.pbm1
  mapsplit chain --steps 1000 --rng-seed 1 --threads 4
"""

    def add_arguments(self, parser: ArgumentParser):
        self.add_data_arguments(parser)
        self.add_constraint_arguments(parser)
        group = parser.add_argument_group("chain")
        group.add_argument("--preset", choices=sorted(PRESETS), help="Chain design to start from")
        group.add_argument("--steps", type=int, help="Total recorded steps over all seeds")
        group.add_argument("--rng-seed", type=int, help="Seed of the random stream (required)")
        group.add_argument(
            "--seed",
            dest="seed_plans",
            type=Path,
            action="append",
            help="Seed plan (.pbm1 or unit_id,district CSV); repeatable",
        )
        group.add_argument(
            "--random-seeds-from", type=Path, help="Plan file to draw extra random seeds from"
        )
        group.add_argument("--random-seeds", type=int, help="How many random seeds to draw")
        group.add_argument("--max-tree-retries", type=int, help="Tree redraws per step")
        group.add_argument("--threads", type=int, help="Worker processes (one chain each)")

    def config_overrides(self, args: Namespace) -> Dict[str, Any]:
        overrides = super().config_overrides(args)
        chain: Dict[str, Any] = {}
        if args.steps is not None:
            chain["steps"] = args.steps
        if args.rng_seed is not None:
            chain["rng_seed"] = args.rng_seed
        if args.seed_plans:
            chain["seeds"] = [str(p.expanduser().resolve()) for p in args.seed_plans]
        random_seeds: Dict[str, Any] = {}
        if args.random_seeds_from is not None:
            random_seeds["from"] = str(args.random_seeds_from.expanduser().resolve())
        if args.random_seeds is not None:
            random_seeds["count"] = args.random_seeds
        if random_seeds:
            chain["random_seeds"] = random_seeds
        if args.max_tree_retries is not None:
            chain["max_tree_retries"] = args.max_tree_retries
        if args.threads is not None:
            chain["threads"] = args.threads
        if chain:
            overrides["chain"] = chain
        if args.preset is not None:
            overrides["preset"] = args.preset
        return overrides

    def execute(self, args: Namespace) -> bool:
        log_header("RECOM CHAIN")
        cfg = self.load_run_config(args)
        _, graph = load_graph(cfg)
        chain_cfg = chain_config(cfg, graph)

        log_info(
            f"{Emoji.CHAIN} {chain_cfg.steps:,} steps from {len(chain_cfg.seeds)} seed(s), "
            f"rng_seed={chain_cfg.rng_seed}, accept={chain_cfg.accept.describe()['policy']}"
        )
        started = time.time()
        ensemble = run_chain(graph, chain_cfg)
        finished = time.time()
        stats.merge(ensemble.counters)

        written = write_plans(cfg.output / config.PLANS_FILE, graph, ensemble, ensemble.provenance)
        unique = len(ensemble.unique)
        write_json(
            cfg.output / config.MANIFEST_FILE,
            manifest(
                command=self.name,
                config_echo={
                    **cfg.raw,
                    "accept": chain_cfg.accept.describe(),
                    "seeds": [p.to_hex() for p in chain_cfg.seeds],
                },
                graph=graph.describe(),
                results={
                    "plans": written,
                    "unique": unique,
                    "rng_seed": chain_cfg.rng_seed,
                    "chain_lengths": chain_cfg.chain_lengths(),
                    "counters": dict(sorted(ensemble.counters.items())),
                    "plans_file": config.PLANS_FILE,
                },
                started=started,
                finished=finished,
            ),
        )
        print(f"{written} {unique}")
        log_success(f"{written:,} plans recorded, {unique:,} unique", finished - started)
        print_summary()
        return True
