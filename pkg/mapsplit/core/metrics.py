"""
Plan metrics: population deviation, edges removed, Polsby-Popper and
length/width compactness
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from mapsplit.core.errors import GeometryError, UndefinedMetricError
from mapsplit.core.graph import BBox, DualGraph
from mapsplit.core.plans import ConstraintSet, Plan

Pair = Tuple[float, float]

METRIC_COLUMNS = ["plan_id", "pop_dev", "er", "pbp_min", "pbp_mean", "lw_min", "pop_0", "pop_1"]


@dataclass(frozen=True)
class PlanMetrics:
    """
    Scores of one plan. Pairs are indexed by district.

    ``pop_dev`` is exact; ``pop_dev_float`` is the exported value.
    """

    pop_dev: Fraction
    er: int
    pbp: Pair
    lw: Pair
    populations: Tuple[int, int]

    @property
    def pbp_min(self) -> float:
        return min(self.pbp)

    @property
    def pbp_mean(self) -> float:
        return (self.pbp[0] + self.pbp[1]) / 2

    @property
    def lw_min(self) -> float:
        return min(self.lw)

    @property
    def pop_dev_float(self) -> float:
        return float(self.pop_dev)

    def as_row(self, plan_id: int) -> Dict[str, object]:
        """Row of the metrics table"""
        return {
            "plan_id": plan_id,
            "pop_dev": self.pop_dev_float,
            "er": self.er,
            "pbp_min": self.pbp_min,
            "pbp_mean": self.pbp_mean,
            "lw_min": self.lw_min,
            "pop_0": self.populations[0],
            "pop_1": self.populations[1],
        }


# ============================================================================
# Population
# ============================================================================


def district_populations(g: DualGraph, p: Plan) -> Tuple[int, int]:
    pops = g.populations
    pop1 = sum(pops[i] for i in range(g.n) if p.assignment >> i & 1)
    return g.total_population - pop1, pop1


def pop_deviation(g: DualGraph, p: Plan) -> Tuple[Fraction, Tuple[int, int]]:
    """
    Shared deviation |ideal - p_i| / ideal of both districts, ideal = total / 2.

    Raises:
        UndefinedMetricError: Total population is 0
    """
    populations = district_populations(g, p)
    total = populations[0] + populations[1]
    if total == 0:
        raise UndefinedMetricError("population deviation undefined: total population is 0")
    # |total/2 - p0| / (total/2)
    return Fraction(abs(total - 2 * populations[0]), total), populations


# ============================================================================
# Compactness
# ============================================================================


def edges_removed(g: DualGraph, p: Plan) -> int:
    """Contiguity edges whose endpoints lie in different districts"""
    a = p.assignment
    return sum(1 for e in g.edges if (a >> e.a ^ a >> e.b) & 1)


def district_perimeter(g: DualGraph, p: Plan, district: int) -> float:
    """Summed unit perimeters minus twice every interior shared border"""
    mask = p.district_mask(district)
    total = sum(g.units[i].perimeter for i in range(g.n) if mask >> i & 1)
    interior = sum(
        e.shared_perimeter for e in g.border_edges if mask >> e.a & 1 and mask >> e.b & 1
    )
    return total - 2.0 * interior


def polsby_popper(g: DualGraph, p: Plan) -> Pair:
    """
    4*pi*A / P^2 per district.

    Interior borders come from ``border_edges`` so pruning does not change
    the perimeter.

    Raises:
        GeometryError: A district perimeter is not positive
    """
    scores: List[float] = []
    for district in (0, 1):
        mask = p.district_mask(district)
        area = sum(g.units[i].area for i in range(g.n) if mask >> i & 1)
        perimeter = district_perimeter(g, p, district)
        if not perimeter > 0:
            raise GeometryError(
                f"district {district} has non-positive derived perimeter ({perimeter:.6g} km)"
            )
        scores.append(4.0 * math.pi * area / perimeter**2)
    return scores[0], scores[1]


def district_bbox(g: DualGraph, p: Plan, district: int) -> BBox:
    boxes = [g.units[i].bbox for i in p.members(district)]
    box = boxes[0]
    for other in boxes[1:]:
        box = box.union(other)
    return box


def length_width(g: DualGraph, p: Plan) -> Pair:
    """
    Short side over long side of each district's axis-aligned bounding box.

    Raises:
        GeometryError: A bounding box has zero extent
    """
    scores: List[float] = []
    for district in (0, 1):
        box = district_bbox(g, p, district)
        dx, dy = box.max_x - box.min_x, box.max_y - box.min_y
        if not (dx > 0 and dy > 0):
            raise GeometryError(f"district {district} has a degenerate bounding box {tuple(box)}")
        scores.append(min(dx, dy) / max(dx, dy))
    return scores[0], scores[1]


# ============================================================================
# Aggregates
# ============================================================================


def score_plan(g: DualGraph, p: Plan) -> PlanMetrics:
    dev, populations = pop_deviation(g, p)
    return PlanMetrics(
        pop_dev=dev,
        er=edges_removed(g, p),
        pbp=polsby_popper(g, p),
        lw=length_width(g, p),
        populations=populations,
    )


def satisfies(g: DualGraph, p: Plan, c: ConstraintSet) -> bool:
    """Does the plan meet every hard constraint in ``c``? (bounds are exclusive)"""
    if c.max_er is not None and not edges_removed(g, p) < c.max_er:
        return False
    if c.max_pop_dev is not None and not pop_deviation(g, p)[0] < c.max_pop_dev:
        return False
    return True
