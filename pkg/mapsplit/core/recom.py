"""
Two-district ReCom chain

Each step draws a uniform spanning tree of the whole map, cuts one
population-balanced tree edge chosen uniformly, and passes the result
through the hard constraints and an acceptance policy. A rejected or
impossible step records the current plan again.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from mapsplit.config import DEFAULT_MAX_TREE_RETRIES
from mapsplit.core.errors import ConfigError, ConstraintError
from mapsplit.core.graph import DualGraph
from mapsplit.core.metrics import edges_removed, satisfies
from mapsplit.core.plans import ConstraintSet, Ensemble, Plan, PopulationWindow, Provenance
from mapsplit.core.trees import wilson_parents


# Chain designs of the sampling comparison. Seeds are supplied separately.
PRESETS: Dict[str, Dict] = {
    "ensemble2": {
        "constraints": {"max_pop_dev": 0.03, "max_er": 22},
        "chain": {"steps": 100_000, "accept": {"policy": "always"}},
    },
    "ensemble3": {
        "constraints": {"max_pop_dev": 0.4, "max_er": 64},
        "chain": {
            "steps": 100_000,
            "accept": {
                "policy": "threshold",
                "inner": {"max_pop_dev": 0.03, "max_er": 22},
                "fallback_prob": 0.05,
            },
        },
    },
    "ensemble4": {
        "constraints": {"max_pop_dev": 0.03, "max_er": 22},
        "chain": {
            "steps": 100_000,
            "accept": {"policy": "always"},
            "random_seeds": {"count": 4},
        },
    },
}


# ============================================================================
# Acceptance policies
# ============================================================================


@dataclass(frozen=True)
class AlwaysAccept:
    """Accept every proposal that meets the hard constraints"""

    def accept(self, g: DualGraph, plan: Plan, rng: np.random.Generator) -> bool:
        return True

    def describe(self) -> Dict:
        return {"policy": "always"}


@dataclass(frozen=True)
class ThresholdAccept:
    """
    Accept proposals meeting ``inner``; accept the rest with ``fallback_prob``.
    """

    inner: ConstraintSet
    fallback_prob: float

    def __post_init__(self):
        if not 0.0 <= self.fallback_prob <= 1.0:
            raise ConfigError(f"fallback_prob must lie in [0, 1] (got {self.fallback_prob})")

    def accept(self, g: DualGraph, plan: Plan, rng: np.random.Generator) -> bool:
        if satisfies(g, plan, self.inner):
            return True
        return bool(rng.random() < self.fallback_prob)

    def describe(self) -> Dict:
        return {
            "policy": "threshold",
            "inner": self.inner.to_dict(),
            "fallback_prob": self.fallback_prob,
        }


AcceptPolicy = Union[AlwaysAccept, ThresholdAccept]


def accept_policy_from_dict(data: Optional[Dict]) -> AcceptPolicy:
    data = data or {"policy": "always"}
    policy = data.get("policy", "always")
    if policy == "always":
        return AlwaysAccept()
    if policy == "threshold":
        if "fallback_prob" not in data:
            raise ConfigError("threshold acceptance needs 'fallback_prob'")
        return ThresholdAccept(
            inner=ConstraintSet.from_dict(data.get("inner")),
            fallback_prob=float(data["fallback_prob"]),
        )
    raise ConfigError(f"unknown acceptance policy: {policy!r} (use 'always' or 'threshold')")


# ============================================================================
# Chain configuration
# ============================================================================


@dataclass
class ChainConfig:
    """
    Settings of one chain run.

    Attributes:
        steps: Total recorded steps over all seeds
        hard_constraints: Bounds every proposal must meet
        accept: Acceptance policy applied after the hard constraints
        seeds: Starting plans, one chain each
        rng_seed: Seed of the run's random stream
        max_tree_retries: Tree redraws per step before recording a repeat
        threads: Worker processes for independent chains
    """

    steps: int
    hard_constraints: ConstraintSet
    seeds: List[Plan]
    rng_seed: int
    accept: AcceptPolicy = field(default_factory=AlwaysAccept)
    max_tree_retries: int = DEFAULT_MAX_TREE_RETRIES
    threads: int = 1

    def __post_init__(self):
        if self.steps < 1:
            raise ConfigError(f"steps must be >= 1 (got {self.steps})")
        if not self.seeds:
            raise ConfigError("a chain needs at least one seed plan")
        if self.max_tree_retries < 1:
            raise ConfigError(f"max_tree_retries must be >= 1 (got {self.max_tree_retries})")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1 (got {self.threads})")

    def chain_lengths(self) -> List[int]:
        """Steps per seed; the remainder goes to the first seeds"""
        base, extra = divmod(self.steps, len(self.seeds))
        return [base + (1 if i < extra else 0) for i in range(len(self.seeds))]


# ============================================================================
# Steps
# ============================================================================


def _balanced_cuts(
    g: DualGraph, parent: List[int], window: Optional[PopulationWindow]
) -> List[int]:
    """
    Unit masks of the subtrees that cutting one tree edge would detach, for
    every edge leaving both sides inside ``window``. The tree is rooted at
    unit 0, so no returned mask contains it.
    """
    n = g.n
    children: List[List[int]] = [[] for _ in range(n)]
    for v, p in enumerate(parent):
        if p >= 0:
            children[p].append(v)
    order = [0]
    for v in order:
        order.extend(children[v])

    pops = list(g.populations)
    masks = [1 << v for v in range(n)]
    for v in reversed(order):
        p = parent[v]
        if p >= 0:
            pops[p] += pops[v]
            masks[p] |= masks[v]

    return [masks[v] for v in order[1:] if window is None or window.contains(pops[v])]


def recom_step(
    g: DualGraph,
    current: Plan,
    cfg: ChainConfig,
    rng: np.random.Generator,
    counters: Optional[Dict[str, int]] = None,
) -> Plan:
    """
    One chain step; returns the next plan (``current`` again on rejection).
    """
    if counters is None:
        counters = {}

    def bump(name: str):
        counters[name] = counters.get(name, 0) + 1

    window = cfg.hard_constraints.window(g.total_population)
    for _ in range(cfg.max_tree_retries):
        parent = wilson_parents(g.neighbors, 0, rng)
        cuts = _balanced_cuts(g, parent, window)
        if not cuts:
            bump("tree_redraws")
            continue

        proposal = Plan(cuts[int(rng.integers(len(cuts)))], g.n, g.graph_id)
        bump("proposals")
        max_er = cfg.hard_constraints.max_er
        if max_er is not None and not edges_removed(g, proposal) < max_er:
            bump("rejected")
            return current
        if not cfg.accept.accept(g, proposal, rng):
            bump("rejected")
            return current
        bump("accepted")
        return proposal

    bump("no_cut")
    return current


def _run_single(
    g: DualGraph, cfg: ChainConfig, seed: Plan, length: int, seed_seq: np.random.SeedSequence
) -> Tuple[List[Plan], Dict[str, int]]:
    rng = np.random.default_rng(seed_seq)
    counters: Dict[str, int] = {}
    plans: List[Plan] = []
    current = seed
    for _ in range(length):
        current = recom_step(g, current, cfg, rng, counters)
        plans.append(current)
    counters["steps"] = length
    return plans, counters


def check_seed(g: DualGraph, seed: Plan, constraints: ConstraintSet, label: str = "seed"):
    """
    Raises:
        ConstraintError: The seed is not a valid contiguous plan meeting ``constraints``
    """
    if seed.n != g.n:
        raise ConstraintError(f"{label}: plan has {seed.n} units, graph has {g.n}")
    for district in (0, 1):
        if not g.is_connected_mask(seed.district_mask(district)):
            raise ConstraintError(f"{label}: district {district} is empty or not contiguous")
    if not satisfies(g, seed, constraints):
        raise ConstraintError(
            f"{label}: plan violates the hard constraints {constraints.to_dict()}"
        )


def run_chain(g: DualGraph, cfg: ChainConfig) -> Ensemble:
    """
    One independent chain per seed, concatenated in seed order.

    Raises:
        StructureError: ``g`` is disconnected
        ConstraintError: A seed violates the hard constraints
    """
    g.require_connected("run_chain")
    for i, seed in enumerate(cfg.seeds):
        check_seed(g, seed, cfg.hard_constraints, label=f"seed {i}")

    lengths = cfg.chain_lengths()
    sequences = np.random.SeedSequence(cfg.rng_seed).spawn(len(cfg.seeds))
    jobs = [
        (g, cfg, seed.canonical(), length, seq)
        for seed, length, seq in zip(cfg.seeds, lengths, sequences)
        if length > 0
    ]

    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.threads, len(jobs))) as pool:
            results = list(pool.map(_run_single, *zip(*jobs)))
    else:
        results = [_run_single(*job) for job in jobs]

    recorded: List[Tuple[int, Plan]] = []
    counters: Dict[str, int] = {}
    for plans, chain_counters in results:
        for plan in plans:
            recorded.append((len(recorded), plan))
        for name, amount in chain_counters.items():
            counters[name] = counters.get(name, 0) + amount

    return Ensemble(plans=recorded, provenance=Provenance.CHAIN, counters=counters)


def unique_plans(e: Ensemble) -> Ensemble:
    """Canonical-form dedup keeping the first occurrence's step index"""
    return Ensemble(
        plans=list(e.first_occurrences), provenance=e.provenance, counters=dict(e.counters)
    )


def pick_random_seeds(
    plans: List[Plan], count: int, rng: np.random.Generator
) -> List[Plan]:
    """``count`` distinct plans drawn without replacement"""
    if count > len(plans):
        raise ConfigError(f"cannot draw {count} random seeds from {len(plans)} plans")
    picks = rng.choice(len(plans), size=count, replace=False)
    return [plans[int(i)] for i in picks]
