"""
Spanning-tree mathematics

Exact tree counts (matrix-tree theorem with fraction-free elimination),
uniform spanning tree draws (loop-erased random walks), the plan weight
sp(P) and the proposal distribution a tree-cut chain induces on a plan set.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from mapsplit.core.errors import DomainError, StructureError
from mapsplit.core.graph import DualGraph, is_connected_mask
from mapsplit.core.metrics import edges_removed
from mapsplit.core.plans import Plan

TreeEdges = Tuple[Tuple[int, int], ...]

PROBABILITY_DIGITS = 12


# ============================================================================
# Counting
# ============================================================================


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free Gaussian elimination)"""
    m = [list(row) for row in matrix]
    size = len(m)
    if size == 0:
        return 1
    sign = 1
    previous = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, size):
            row_i = m[i]
            factor = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
            row_i[k] = 0
        previous = pivot
    return sign * m[-1][-1]


def reduced_laplacian(
    neighbors: Sequence[Sequence[int]], members: Sequence[int]
) -> List[List[int]]:
    """Laplacian of the subgraph induced by ``members`` with its first row/column deleted"""
    index = {v: i for i, v in enumerate(members)}
    size = len(members)
    lap = [[0] * size for _ in range(size)]
    for v in members:
        i = index[v]
        for u in neighbors[v]:
            j = index.get(u)
            if j is not None:
                lap[i][i] += 1
                lap[i][j] -= 1
    return [row[1:] for row in lap[1:]]


def spanning_tree_count(g: DualGraph, mask: Optional[int] = None) -> int:
    """
    Number of spanning trees of ``g`` (or of the subgraph induced by ``mask``).

    A disconnected (or empty) vertex set has 0 spanning trees.
    """
    if mask is None:
        mask = g.full_mask
    if not is_connected_mask(g.neighbor_masks, mask):
        return 0
    members = [i for i in range(g.n) if mask >> i & 1]
    if len(members) == 1:
        return 1
    return bareiss_determinant(reduced_laplacian(g.neighbors, members))


def sp_partition(g: DualGraph, p: Plan) -> int:
    """sp(P) = sp(V0) * sp(V1) * ER(P): spanning trees of g that yield P with one cut"""
    return (
        spanning_tree_count(g, p.district_mask(0))
        * spanning_tree_count(g, p.district_mask(1))
        * edges_removed(g, p)
    )


# ============================================================================
# Proposal distribution
# ============================================================================


@dataclass
class ProposalDistribution:
    """
    Probability that one uniform tree draw plus a uniform cut proposes each plan,
    restricted to a plan set E.

    Attributes:
        per_plan: plan -> sp(P) / sum of sp(Q) over E
        per_er: ER score C -> probability of proposing some plan with score C
        plans_per_er: ER score -> number of plans of E with that score
        weights: plan -> sp(P)
    """

    per_plan: Dict[Plan, Fraction]
    per_er: Dict[int, Fraction]
    plans_per_er: Dict[int, int]
    weights: Dict[Plan, int] = field(default_factory=dict)

    @property
    def total_weight(self) -> int:
        return sum(self.weights.values())

    def rows(self) -> List[Dict[str, object]]:
        """``er_score,probability,num_plans`` rows in increasing ER"""
        return [
            {
                "er_score": er,
                "probability": float(f"{float(self.per_er[er]):.{PROBABILITY_DIGITS}g}"),
                "num_plans": self.plans_per_er[er],
            }
            for er in sorted(self.per_er)
        ]


def proposal_distribution(g: DualGraph, plans: Iterable[Plan]) -> ProposalDistribution:
    """
    Exact sp(P)-proportional distribution over a plan set.

    Repeated plans are counted once.

    Raises:
        DomainError: The plan set is empty
    """
    weights: Dict[Plan, int] = {}
    er_of: Dict[Plan, int] = {}
    for plan in plans:
        key = plan.canonical()
        if key in weights:
            continue
        weights[key] = sp_partition(g, key)
        er_of[key] = edges_removed(g, key)
    if not weights:
        raise DomainError("proposal distribution needs at least one plan")
    total = sum(weights.values())
    if total == 0:
        raise DomainError("no plan in the set can be proposed (all sp(P) are 0)")

    per_plan = {plan: Fraction(w, total) for plan, w in weights.items()}
    er_weight: Dict[int, int] = defaultdict(int)
    plans_per_er: Dict[int, int] = defaultdict(int)
    for plan, w in weights.items():
        er_weight[er_of[plan]] += w
        plans_per_er[er_of[plan]] += 1
    per_er = {er: Fraction(w, total) for er, w in er_weight.items()}
    return ProposalDistribution(per_plan, per_er, dict(plans_per_er), weights)


# ============================================================================
# Sampling
# ============================================================================


class _UniformStream:
    """Buffered uniform draws from a numpy Generator"""

    def __init__(self, rng: np.random.Generator, size: int = 1024):
        self.rng = rng
        self.size = size
        self._buffer = rng.random(size)
        self._pos = 0

    def choice(self, count: int) -> int:
        if self._pos == self.size:
            self._buffer = self.rng.random(self.size)
            self._pos = 0
        value = self._buffer[self._pos]
        self._pos += 1
        return min(int(value * count), count - 1)


def wilson_parents(
    neighbors: Sequence[Sequence[int]], root: int, rng: np.random.Generator
) -> List[int]:
    """
    Uniform spanning tree as parent pointers toward ``root`` (root's parent is -1).

    Each walk overwrites the pointer of every vertex it leaves, so following
    the pointers afterwards traces the loop-erased path.
    """
    n = len(neighbors)
    stream = _UniformStream(rng, size=max(64, 4 * n))
    in_tree = [False] * n
    in_tree[root] = True
    parent = [-1] * n
    for start in range(n):
        u = start
        while not in_tree[u]:
            nbrs = neighbors[u]
            parent[u] = nbrs[stream.choice(len(nbrs))]
            u = parent[u]
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            u = parent[u]
    return parent


def sample_spanning_tree(g: DualGraph, rng: np.random.Generator) -> TreeEdges:
    """
    Uniformly random spanning tree of ``g`` as sorted (a, b) pairs with a < b.

    Raises:
        StructureError: ``g`` is disconnected
    """
    if not g.connected:
        raise StructureError("sample_spanning_tree: graph is disconnected")
    if g.n == 1:
        return ()
    parent = wilson_parents(g.neighbors, 0, rng)
    return tuple(sorted((min(v, p), max(v, p)) for v, p in enumerate(parent) if p >= 0))
