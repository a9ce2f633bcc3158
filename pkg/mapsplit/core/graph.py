"""
Unit data ingestion and the dual graph

Loads unit attributes (population, area, perimeter, bounding box, optional vote
counts) and shared-border records, builds the dual graph and applies the
short-border pruning rule.
"""

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import pandas as pd

from mapsplit.core.errors import (
    ConfigError,
    DataError,
    DuplicateUnitError,
    ParseError,
    PruningError,
    SchemaError,
    StructureError,
    UnknownUnitError,
)

# ============================================================================
# Constants
# ============================================================================

UNIT_COLUMNS = [
    "unit_id",
    "population",
    "area_km2",
    "perimeter_km",
    "bbox_minx",
    "bbox_miny",
    "bbox_maxx",
    "bbox_maxy",
]

ADJACENCY_COLUMNS = ["unit_a", "unit_b", "shared_perimeter_km"]

VOTE_SUFFIXES = ("_dem", "_rep", "_ind")


# ============================================================================
# Records
# ============================================================================


class BBox(NamedTuple):
    """Axis-aligned bounding box in a planar projection (km)"""

    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def union(self, other: "BBox") -> "BBox":
        return BBox(
            min(self.min_x, other.min_x),
            min(self.min_y, other.min_y),
            max(self.max_x, other.max_x),
            max(self.max_y, other.max_y),
        )


class Votes(NamedTuple):
    """Vote counts of one contest in one unit"""

    dem: int
    rep: int
    ind: int = 0


class UnitRecord(NamedTuple):
    """
    One geographic unit (a county or a county piece).

    Attributes:
        unit_id: Unique name
        population: Persons
        area: km²
        perimeter: km
        bbox: Bounding box (km, planar)
        votes: contest_id -> Votes
    """

    unit_id: str
    population: int
    area: float
    perimeter: float
    bbox: BBox
    votes: Mapping[str, Votes] = {}


class AdjacencyRecord(NamedTuple):
    """A shared border between two units"""

    unit_a: str
    unit_b: str
    shared_perimeter: float


class Edge(NamedTuple):
    """Dual-graph edge between unit indices a < b"""

    a: int
    b: int
    shared_perimeter: float


class BorderRow(NamedTuple):
    """One line of the border report"""

    unit_a: str
    unit_b: str
    shared_km: float
    pct_a: float
    pct_b: float
    removed: bool


# ============================================================================
# Dual graph
# ============================================================================


@dataclass(frozen=True)
class DualGraph:
    """
    Immutable dual graph of a unit map.

    ``edges`` defines contiguity. ``border_edges`` holds every physical shared
    border that was loaded, and survives pruning so that district perimeters
    can still be computed from it.
    """

    units: Tuple[UnitRecord, ...]
    edges: Tuple[Edge, ...]
    border_edges: Tuple[Edge, ...] = field(default=())
    connected: bool = True

    @property
    def n(self) -> int:
        return len(self.units)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def unit_ids(self) -> Tuple[str, ...]:
        return tuple(u.unit_id for u in self.units)

    @cached_property
    def index_of(self) -> Dict[str, int]:
        return {u.unit_id: i for i, u in enumerate(self.units)}

    @cached_property
    def populations(self) -> Tuple[int, ...]:
        return tuple(u.population for u in self.units)

    @cached_property
    def total_population(self) -> int:
        return sum(self.populations)

    @cached_property
    def neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        adj: List[List[int]] = [[] for _ in range(self.n)]
        for e in self.edges:
            adj[e.a].append(e.b)
            adj[e.b].append(e.a)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def neighbor_masks(self) -> Tuple[int, ...]:
        masks = []
        for nbrs in self.neighbors:
            mask = 0
            for j in nbrs:
                mask |= 1 << j
            masks.append(mask)
        return tuple(masks)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def graph_id(self) -> str:
        """Short content hash of unit names and contiguity edges"""
        digest = hashlib.sha1()
        for unit_id in self.unit_ids:
            digest.update(unit_id.encode("utf-8") + b"\n")
        for e in self.edges:
            digest.update(f"{e.a}-{e.b}\n".encode("ascii"))
        return digest.hexdigest()[:12]

    @cached_property
    def nx_graph(self) -> nx.Graph:
        """networkx view of the contiguity graph (nodes are unit indices)"""
        graph = nx.Graph()
        for i, unit in enumerate(self.units):
            graph.add_node(i, unit_id=unit.unit_id, population=unit.population)
        for e in self.edges:
            graph.add_edge(e.a, e.b, shared_perimeter=e.shared_perimeter)
        return graph

    def require_connected(self, operation: str):
        """Raise StructureError unless the graph is connected with n >= 2"""
        if self.n < 2:
            raise StructureError(f"{operation}: graph needs at least 2 units (has {self.n})")
        if not self.connected:
            raise StructureError(f"{operation}: graph is disconnected")

    def is_connected_mask(self, mask: int) -> bool:
        """True if the units in ``mask`` induce a non-empty connected subgraph"""
        return is_connected_mask(self.neighbor_masks, mask)

    def describe(self) -> Dict[str, Any]:
        """Summary figures logged by commands"""
        return {
            "graph_id": self.graph_id,
            "n": self.n,
            "m": self.m,
            "borders": len(self.border_edges),
            "connected": self.connected,
            "total_population": self.total_population,
            "ideal_population": self.total_population / 2,
        }


def is_connected_mask(neighbor_masks: Sequence[int], mask: int) -> bool:
    """Bitmask BFS: does ``mask`` induce a connected subgraph?"""
    if mask == 0:
        return False
    seen = mask & -mask
    frontier = seen
    while frontier:
        bit = frontier & -frontier
        frontier ^= bit
        grown = neighbor_masks[bit.bit_length() - 1] & mask & ~seen
        seen |= grown
        frontier |= grown
    return seen == mask


# ============================================================================
# Loading
# ============================================================================


def _read_rows(path: Path, fmt: Optional[str]) -> Tuple[List[str], List[Dict[str, str]]]:
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    if not path.is_file():
        raise DataError(f"file not found: {path}")

    if fmt == "csv":
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
        frame.columns = [str(c).strip() for c in frame.columns]
        return list(frame.columns), frame.to_dict("records")

    if fmt in ("geojson", "json"):
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
        rows = [
            {k: "" if v is None else str(v) for k, v in feature.get("properties", {}).items()}
            for feature in document.get("features", [])
        ]
        columns: List[str] = []
        for row in rows:
            columns.extend(c for c in row if c not in columns)
        return columns, rows

    raise DataError(f"unsupported unit file format: {fmt}")


def _parse(value: str, kind: type, source: str, row: int, column: str):
    try:
        return kind(value.strip())
    except (TypeError, ValueError):
        raise ParseError(source, row, column, value) from None


def _vote_contests(columns: Iterable[str], source: str) -> List[str]:
    contests: List[str] = []
    present = set(columns)
    for column in columns:
        for suffix in VOTE_SUFFIXES:
            if column.endswith(suffix):
                contest = column[: -len(suffix)]
                if contest and contest not in contests:
                    contests.append(contest)
    for contest in contests:
        for suffix in ("_dem", "_rep"):
            if contest + suffix not in present:
                raise SchemaError(contest + suffix, source)
    return contests


def _parse_votes(
    row: Mapping[str, str], contests: Sequence[str], source: str, line: int
) -> Dict[str, Votes]:
    votes = {}
    for contest in contests:
        counts = []
        for suffix in VOTE_SUFFIXES:
            column = contest + suffix
            raw = row.get(column, "")
            if suffix == "_ind" and raw.strip() == "":
                counts.append(0)
                continue
            value = _parse(raw, int, source, line, column)
            if value < 0:
                raise ParseError(source, line, column, raw)
            counts.append(value)
        votes[contest] = Votes(*counts)
    return votes


def load_units(path, format: Optional[str] = None) -> List[UnitRecord]:
    """
    Load unit records from a CSV (or the properties of a GeoJSON FeatureCollection).

    Args:
        path: File to read
        format: "csv" or "geojson"; inferred from the suffix when omitted

    Returns:
        One UnitRecord per row, in file order

    Raises:
        SchemaError: A required column is missing
        ParseError: A field is not numeric or violates its range (row number given)
        DuplicateUnitError: A unit_id appears twice
    """
    path = Path(path)
    source = path.name
    columns, rows = _read_rows(path, format)
    for column in UNIT_COLUMNS:
        if column not in columns:
            raise SchemaError(column, source)
    contests = _vote_contests(columns, source)

    units: List[UnitRecord] = []
    seen = set()
    for number, row in enumerate(rows, start=1):
        unit_id = row["unit_id"].strip()
        if unit_id in seen:
            raise DuplicateUnitError(unit_id, source)
        seen.add(unit_id)

        population = _parse(row["population"], int, source, number, "population")
        area = _parse(row["area_km2"], float, source, number, "area_km2")
        perimeter = _parse(row["perimeter_km"], float, source, number, "perimeter_km")
        bbox = BBox(
            *(_parse(row[c], float, source, number, c) for c in UNIT_COLUMNS[4:])
        )

        if population < 0:
            raise ParseError(source, number, "population", row["population"])
        if not area > 0:
            raise ParseError(source, number, "area_km2", row["area_km2"])
        if not perimeter > 0:
            raise ParseError(source, number, "perimeter_km", row["perimeter_km"])
        if not (bbox.min_x < bbox.max_x and bbox.min_y < bbox.max_y):
            raise ParseError(source, number, "bbox", str(tuple(bbox)))

        votes = _parse_votes(row, contests, source, number)
        units.append(UnitRecord(unit_id, population, area, perimeter, bbox, votes))

    return units


def load_adjacency(path) -> List[AdjacencyRecord]:
    """
    Load shared-border records.

    Raises:
        SchemaError: A required column is missing
        ParseError: Non-numeric or non-positive length, or a self-loop
        DataError: The same unordered pair appears twice
    """
    path = Path(path)
    source = path.name
    columns, rows = _read_rows(path, "csv")
    for column in ADJACENCY_COLUMNS:
        if column not in columns:
            raise SchemaError(column, source)

    records: List[AdjacencyRecord] = []
    pairs = set()
    for number, row in enumerate(rows, start=1):
        a, b = row["unit_a"].strip(), row["unit_b"].strip()
        length = _parse(row["shared_perimeter_km"], float, source, number, "shared_perimeter_km")
        if a == b:
            raise ParseError(source, number, "unit_b", b)
        if not length > 0:
            raise ParseError(source, number, "shared_perimeter_km", row["shared_perimeter_km"])
        pair = frozenset((a, b))
        if pair in pairs:
            raise DataError(f"{source}: row {number}: duplicate border {a} / {b}")
        pairs.add(pair)
        records.append(AdjacencyRecord(a, b, length))
    return records


def attach_votes(units: Sequence[UnitRecord], path) -> List[UnitRecord]:
    """
    Merge vote columns from a separate election CSV keyed by unit_id.

    Contests already present on a unit are overwritten by the file's values.
    """
    path = Path(path)
    source = path.name
    columns, rows = _read_rows(path, "csv")
    if "unit_id" not in columns:
        raise SchemaError("unit_id", source)
    contests = _vote_contests(columns, source)

    by_id = {}
    for number, row in enumerate(rows, start=1):
        unit_id = row["unit_id"].strip()
        if unit_id in by_id:
            raise DuplicateUnitError(unit_id, source)
        by_id[unit_id] = _parse_votes(row, contests, source, number)

    known = {u.unit_id for u in units}
    for unit_id in by_id:
        if unit_id not in known:
            raise UnknownUnitError(unit_id, source)

    merged = []
    for unit in units:
        votes = dict(unit.votes)
        votes.update(by_id.get(unit.unit_id, {}))
        merged.append(unit._replace(votes=votes))
    return merged


# ============================================================================
# Graph construction and pruning
# ============================================================================


def build_graph(
    units: Sequence[UnitRecord], adjacency: Sequence[AdjacencyRecord]
) -> DualGraph:
    """
    Build the dual graph.

    A disconnected result is returned with ``connected=False``; operations
    that need contiguity check it themselves.

    Raises:
        UnknownUnitError: An adjacency record names a unit that was not loaded
        DataError: Duplicate unit ids or duplicate borders
    """
    index = {}
    for i, unit in enumerate(units):
        if unit.unit_id in index:
            raise DuplicateUnitError(unit.unit_id, "units")
        index[unit.unit_id] = i

    edges: List[Edge] = []
    seen = set()
    for record in adjacency:
        for name in (record.unit_a, record.unit_b):
            if name not in index:
                raise UnknownUnitError(name)
        a, b = sorted((index[record.unit_a], index[record.unit_b]))
        if a == b or (a, b) in seen:
            raise DataError(
                f"adjacency: invalid or repeated border {record.unit_a} / {record.unit_b}"
            )
        seen.add((a, b))
        edges.append(Edge(a, b, record.shared_perimeter))

    edges_t = tuple(edges)
    return DualGraph(
        units=tuple(units),
        edges=edges_t,
        border_edges=edges_t,
        connected=_connected(len(units), edges_t),
    )


def _connected(n: int, edges: Sequence[Edge]) -> bool:
    if n == 0:
        return False
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((e.a, e.b) for e in edges)
    return nx.is_connected(graph)


def is_short_border(
    edge: Edge, units: Sequence[UnitRecord], min_length: float, min_fraction: float
) -> bool:
    """Pruning predicate: short AND a small share of both units' perimeters"""
    length = edge.shared_perimeter
    return (
        length < min_length
        and length / units[edge.a].perimeter < min_fraction
        and length / units[edge.b].perimeter < min_fraction
    )


def prune_short_borders(g: DualGraph, min_length: float, min_fraction: float) -> DualGraph:
    """
    Remove edges whose shared border is short in absolute and relative terms.

    Only contiguity edges are removed; ``border_edges`` is kept intact.

    Raises:
        ConfigError: Thresholds out of range
        StructureError: Input graph disconnected
        PruningError: The pruned graph would be disconnected
    """
    if min_length < 0:
        raise ConfigError(f"min_length must be >= 0 (got {min_length})")
    if not 0 < min_fraction < 1:
        raise ConfigError(f"min_fraction must lie in (0, 1) (got {min_fraction})")
    g.require_connected("prune_short_borders")

    kept = tuple(e for e in g.edges if not is_short_border(e, g.units, min_length, min_fraction))
    if len(kept) == len(g.edges):
        return g

    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from((e.a, e.b) for e in kept)
    if not nx.is_connected(graph):
        components = sorted(nx.connected_components(graph), key=len, reverse=True)
        raise PruningError([[g.units[i].unit_id for i in c] for c in components])

    return DualGraph(units=g.units, edges=kept, border_edges=g.border_edges, connected=True)


def border_report(
    g: DualGraph,
    min_length: float,
    min_fraction: float,
    max_length: Optional[float] = None,
) -> List[BorderRow]:
    """
    List shared borders in increasing length with their perimeter shares.

    Args:
        g: Graph whose ``border_edges`` are reported
        min_length: Pruning length threshold (km)
        min_fraction: Pruning fraction threshold
        max_length: Only report borders shorter than this (km)
    """
    rows = []
    for edge in sorted(g.border_edges, key=lambda e: (e.shared_perimeter, e.a, e.b)):
        if max_length is not None and not edge.shared_perimeter < max_length:
            continue
        unit_a, unit_b = g.units[edge.a], g.units[edge.b]
        rows.append(
            BorderRow(
                unit_a=unit_a.unit_id,
                unit_b=unit_b.unit_id,
                shared_km=edge.shared_perimeter,
                pct_a=100.0 * edge.shared_perimeter / unit_a.perimeter,
                pct_b=100.0 * edge.shared_perimeter / unit_b.perimeter,
                removed=is_short_border(edge, g.units, min_length, min_fraction),
            )
        )
    return rows
