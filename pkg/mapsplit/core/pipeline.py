"""
Shared command plumbing: load the graph a run configuration describes,
load plan files and build chain configurations
"""

from typing import List, Tuple

import numpy as np

from mapsplit.core.graph import (
    DualGraph,
    attach_votes,
    build_graph,
    load_adjacency,
    load_units,
    prune_short_borders,
)
from mapsplit.core.logger import log_info, log_warning
from mapsplit.core.plans import Ensemble, Plan, load_plan_source, read_plans
from mapsplit.core.recom import ChainConfig, pick_random_seeds
from mapsplit.core.run_config import RunConfig

# Stream of the run seed reserved for drawing random seed plans; chains use
# the spawned children 0..k-1.
SEED_DRAW_STREAM = 2**31 - 1


def load_graph(cfg: RunConfig) -> Tuple[DualGraph, DualGraph]:
    """
    Load units, votes and borders, then prune.

    Returns:
        (unpruned graph, working graph); identical when pruning is off
    """
    units = load_units(cfg.units, cfg.units_format)
    if cfg.elections is not None:
        units = attach_votes(units, cfg.elections)
    full = build_graph(units, load_adjacency(cfg.adjacency))
    full.require_connected("load_graph")

    graph = full
    if cfg.graph.prune:
        graph = prune_short_borders(full, cfg.graph.min_length, cfg.graph.min_fraction)

    info = graph.describe()
    log_info(
        f"Graph {info['graph_id']}: {info['n']} units, {full.m} borders, "
        f"{graph.m} edges after pruning ({full.m - graph.m} removed)"
    )
    log_info(
        f"Population {info['total_population']:,} (ideal district {info['ideal_population']:,.1f})"
    )
    return full, graph


def load_ensemble(cfg: RunConfig, graph: DualGraph) -> Ensemble:
    """The plan file named by ``analysis.plans``"""
    ensemble = read_plans(cfg.analysis.plans, graph)
    log_info(
        f"Loaded {len(ensemble):,} {ensemble.provenance.value} plans "
        f"({len(ensemble.unique):,} unique)"
    )
    return ensemble


def load_reference(cfg: RunConfig, graph: DualGraph) -> Plan:
    plans = load_plan_source(cfg.analysis.reference_plan, graph)
    if len(plans) != 1:
        log_warning(f"reference plan file holds {len(plans)} plans; using the first")
    return plans[0]


def chain_seeds(cfg: RunConfig, graph: DualGraph) -> List[Plan]:
    """Explicit seed plans followed by any random draws from an enumerated plan file"""
    seeds: List[Plan] = []
    for path in cfg.chain.seeds:
        seeds.extend(load_plan_source(path, graph))
    count = cfg.chain.random_seeds_count
    if count:
        pool = read_plans(cfg.chain.random_seeds_from, graph).unique
        rng = np.random.default_rng(
            np.random.SeedSequence(cfg.chain.rng_seed, spawn_key=(SEED_DRAW_STREAM,))
        )
        seeds.extend(pick_random_seeds(pool, count, rng))
        log_info(f"Drew {count} random seed plans from {cfg.chain.random_seeds_from.name}")
    return seeds


def chain_config(cfg: RunConfig, graph: DualGraph) -> ChainConfig:
    return ChainConfig(
        steps=cfg.chain.steps,
        hard_constraints=cfg.constraints,
        seeds=chain_seeds(cfg, graph),
        rng_seed=cfg.chain.rng_seed,
        accept=cfg.chain.accept,
        max_tree_retries=cfg.chain.max_tree_retries,
        threads=cfg.chain.threads,
    )
