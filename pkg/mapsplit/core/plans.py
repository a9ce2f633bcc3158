"""
Plans, constraint sets, ensembles and the ``.pbm1`` plan-list format

A plan is a bipartition of the graph's units into district 0 and district 1,
stored as an integer bit-vector (bit i set means unit i is in district 1).
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import IO, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import pandas as pd

from mapsplit.core.errors import (
    ConstraintError,
    DataError,
    OutputError,
    PlanFileError,
    SchemaError,
    UndefinedMetricError,
    UnknownUnitError,
)
from mapsplit.core.graph import DualGraph

PBM1_MAGIC = "#pbm1"


# ============================================================================
# Plan
# ============================================================================


@dataclass(frozen=True)
class Plan:
    """
    Two-district plan.

    Attributes:
        assignment: Bit i is the district (0/1) of unit i
        n: Number of units
        graph_id: Identifier of the graph the plan partitions
    """

    assignment: int
    n: int
    graph_id: str = ""

    @classmethod
    def from_district0(cls, mask0: int, n: int, graph_id: str = "") -> "Plan":
        """Plan whose district 0 is the unit set ``mask0``"""
        return cls(((1 << n) - 1) ^ mask0, n, graph_id)

    @classmethod
    def from_labels(cls, labels: Sequence[int], graph_id: str = "") -> "Plan":
        """Plan from a 0/1 district label per unit"""
        assignment = 0
        for i, label in enumerate(labels):
            if label not in (0, 1):
                raise ValueError(f"district label must be 0 or 1 (unit {i}: {label!r})")
            if label:
                assignment |= 1 << i
        return cls(assignment, len(labels), graph_id)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def district_mask(self, district: int) -> int:
        """Bitmask of the units in ``district``"""
        return self.assignment if district else self.full_mask ^ self.assignment

    def members(self, district: int) -> Tuple[int, ...]:
        """Unit indices of ``district`` in increasing order"""
        mask = self.district_mask(district)
        return tuple(i for i in range(self.n) if mask >> i & 1)

    def labels(self) -> Tuple[int, ...]:
        return tuple(self.assignment >> i & 1 for i in range(self.n))

    @property
    def is_canonical(self) -> bool:
        """Unit 0 sits in district 0"""
        return not self.assignment & 1

    def canonical(self) -> "Plan":
        return self if self.is_canonical else self.flipped()

    def flipped(self) -> "Plan":
        """Same partition with the district labels swapped"""
        return Plan(self.full_mask ^ self.assignment, self.n, self.graph_id)

    def to_hex(self) -> str:
        """District-0 unit set as a hex bitmask"""
        return format(self.district_mask(0), "x")


# ============================================================================
# Constraints
# ============================================================================


@dataclass(frozen=True)
class PopulationWindow:
    """Inclusive integer range of district populations meeting a deviation bound"""

    lo: int
    hi: int

    @classmethod
    def from_bound(cls, total: int, bound: Fraction) -> "PopulationWindow":
        """
        Districts p with |total - 2p| / total < bound, in exact arithmetic.

        With two districts both populations fall in the window or neither does.
        """
        if total <= 0:
            raise UndefinedMetricError("population deviation undefined: total population is 0")
        num, den = bound.numerator, bound.denominator
        # |total - 2p| * den < num * total
        slack = num * total
        lo = (total * den - slack) // (2 * den) + 1
        hi = -((-(total * den + slack)) // (2 * den)) - 1
        return cls(lo, hi)

    def contains(self, population: int) -> bool:
        return self.lo <= population <= self.hi


def as_fraction(value: Union[float, int, str, Fraction]) -> Fraction:
    """Exact decimal reading of a user-supplied bound (0.03 -> 3/100)"""
    if isinstance(value, Fraction):
        return value
    return Fraction(str(value))


@dataclass(frozen=True)
class ConstraintSet:
    """
    Hard constraints on plans. Both bounds are exclusive.

    Attributes:
        max_pop_dev: Population deviation must be < this (in (0, 1])
        max_er: Edges removed must be < this (positive integer)
    """

    max_pop_dev: Optional[Fraction] = None
    max_er: Optional[int] = None

    def __post_init__(self):
        if self.max_pop_dev is not None:
            bound = as_fraction(self.max_pop_dev)
            if not 0 < bound <= 1:
                raise ConstraintError(f"max_pop_dev must lie in (0, 1] (got {self.max_pop_dev})")
            object.__setattr__(self, "max_pop_dev", bound)
        if self.max_er is not None:
            if isinstance(self.max_er, bool) or int(self.max_er) != self.max_er or self.max_er < 1:
                raise ConstraintError(f"max_er must be a positive integer (got {self.max_er})")
            object.__setattr__(self, "max_er", int(self.max_er))

    @classmethod
    def from_dict(cls, data: Optional[Dict]) -> "ConstraintSet":
        data = data or {}
        unknown = set(data) - {"max_pop_dev", "max_er"}
        if unknown:
            raise ConstraintError(f"unknown constraint keys: {', '.join(sorted(unknown))}")
        return cls(max_pop_dev=data.get("max_pop_dev"), max_er=data.get("max_er"))

    @property
    def is_empty(self) -> bool:
        return self.max_pop_dev is None and self.max_er is None

    def window(self, total_population: int) -> Optional[PopulationWindow]:
        if self.max_pop_dev is None:
            return None
        return PopulationWindow.from_bound(total_population, self.max_pop_dev)

    def to_dict(self) -> Dict[str, Union[float, int, None]]:
        return {
            "max_pop_dev": None if self.max_pop_dev is None else float(self.max_pop_dev),
            "max_er": self.max_er,
        }


# ============================================================================
# Ensembles
# ============================================================================


class Provenance(str, Enum):
    """Where the plans of an ensemble came from"""

    ENUMERATED = "enumerated"
    CHAIN = "chain"
    FILE = "file"


@dataclass
class Ensemble:
    """
    Ordered multiset of plans.

    Attributes:
        plans: (step index, plan) pairs in recording order
        provenance: Origin of the plans
        counters: Run counters (chain acceptance and the like)
    """

    plans: List[Tuple[int, Plan]]
    provenance: Provenance
    counters: Dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.plans)

    def __iter__(self) -> Iterator[Plan]:
        return (plan for _, plan in self.plans)

    @cached_property
    def first_occurrences(self) -> List[Tuple[int, Plan]]:
        """(step index, canonical plan) of each distinct plan's first appearance"""
        seen = set()
        result = []
        for step, plan in self.plans:
            key = plan.canonical()
            if key not in seen:
                seen.add(key)
                result.append((step, key))
        return result

    @property
    def unique(self) -> List[Plan]:
        """Distinct canonical plans in first-occurrence order"""
        return [plan for _, plan in self.first_occurrences]


# ============================================================================
# .pbm1 files
# ============================================================================


class PlanWriter:
    """
    Plan sink writing the ``.pbm1`` format: a header line
    ``#pbm1 n=<n> graph=<id> source=<provenance>`` then one hex district-0
    bitmask per line.
    """

    def __init__(self, path, graph: DualGraph, provenance: Provenance = Provenance.FILE):
        self.path = Path(path)
        self.graph = graph
        self.provenance = Provenance(provenance)
        self.count = 0
        self._handle: Optional[IO[str]] = None

    def __enter__(self) -> "PlanWriter":
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = open(self.path, "w", encoding="ascii", newline="\n")
            self._handle.write(
                f"{PBM1_MAGIC} n={self.graph.n} graph={self.graph.graph_id} "
                f"source={self.provenance.value}\n"
            )
        except OSError as exc:
            raise OutputError(self.path, exc) from exc
        return self

    def __exit__(self, *exc):
        if self._handle is not None:
            self._handle.close()
            self._handle = None
        return False

    def __call__(self, plan: Plan):
        if self._handle is None:
            raise RuntimeError("PlanWriter used outside of a with-block")
        self._handle.write(plan.to_hex() + "\n")
        self.count += 1


def write_plans(
    path, graph: DualGraph, plans: Iterable[Plan], provenance: Provenance = Provenance.FILE
) -> int:
    """
    Write plans to a ``.pbm1`` file; returns the number written

    Raises:
        OutputError: The file cannot be created or written
    """
    with PlanWriter(path, graph, provenance) as writer:
        for plan in plans:
            try:
                writer(plan)
            except OSError as exc:
                raise OutputError(writer.path, exc) from exc
    return writer.count


def _parse_header(line: str, source: str) -> Tuple[int, str, Provenance]:
    parts = line.split()
    if not parts or parts[0] != PBM1_MAGIC:
        raise PlanFileError(f"{source}: missing '{PBM1_MAGIC}' header")
    fields = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
    try:
        return int(fields["n"]), fields.get("graph", ""), Provenance(fields.get("source", "file"))
    except (KeyError, ValueError):
        raise PlanFileError(f"{source}: malformed header {line.strip()!r}") from None


def read_plans(path, graph: DualGraph, strict: bool = True) -> Ensemble:
    """
    Read a ``.pbm1`` file into an ensemble.

    The provenance comes from the header's ``source`` field; files without
    one are FILE.

    Args:
        path: Plan file
        graph: Graph the plans must belong to
        strict: Reject files written for a different graph id (n must always match)

    Raises:
        PlanFileError: Bad header, bad line, a non-contiguous plan, or a plan for
            another graph
    """
    path = Path(path)
    source = path.name
    if not path.is_file():
        raise PlanFileError(f"plan file not found: {path}")

    plans: List[Tuple[int, Plan]] = []
    with open(path, "r", encoding="ascii") as f:
        n, graph_id, provenance = _parse_header(f.readline(), source)
        if n != graph.n:
            raise PlanFileError(f"{source}: plans have n={n}, graph has n={graph.n}")
        if strict and graph_id and graph_id != graph.graph_id:
            raise PlanFileError(
                f"{source}: written for graph {graph_id}, current graph is {graph.graph_id}"
            )
        for number, line in enumerate(f, start=2):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                mask0 = int(text, 16)
            except ValueError:
                raise PlanFileError(f"{source}: line {number}: not a hex bitmask") from None
            if mask0 == 0 or mask0 >= graph.full_mask or mask0 < 0:
                raise PlanFileError(f"{source}: line {number}: district 0 empty or all units")
            if not (
                graph.is_connected_mask(mask0) and graph.is_connected_mask(graph.full_mask ^ mask0)
            ):
                raise PlanFileError(f"{source}: line {number}: a district is not contiguous")
            plan = Plan.from_district0(mask0, graph.n, graph.graph_id).canonical()
            plans.append((len(plans), plan))

    return Ensemble(plans=plans, provenance=provenance)


def load_assignment(path, graph: DualGraph) -> Plan:
    """
    Read a ``unit_id,district`` CSV into a canonical plan.

    The two district labels may be any strings; the district holding unit 0
    becomes district 0.
    """
    path = Path(path)
    source = path.name
    if not path.is_file():
        raise DataError(f"assignment file not found: {path}")
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    for column in ("unit_id", "district"):
        if column not in frame.columns:
            raise SchemaError(column, source)

    labels: Dict[str, str] = {}
    for unit_id, district in zip(frame["unit_id"], frame["district"]):
        unit_id = unit_id.strip()
        if unit_id not in graph.index_of:
            raise UnknownUnitError(unit_id, source)
        labels[unit_id] = district.strip()

    missing = [u for u in graph.unit_ids if u not in labels]
    if missing:
        raise DataError(f"{source}: no district for {', '.join(missing[:5])}")
    names = sorted(set(labels.values()))
    if len(names) != 2:
        raise DataError(f"{source}: expected 2 districts, found {len(names)}")

    first = labels[graph.unit_ids[0]]
    return Plan.from_labels(
        [0 if labels[u] == first else 1 for u in graph.unit_ids], graph.graph_id
    )


def load_plan_source(path, graph: DualGraph) -> List[Plan]:
    """Plans from either a ``.pbm1`` file or a ``unit_id,district`` CSV"""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return [load_assignment(path, graph)]
    return list(read_plans(path, graph))
