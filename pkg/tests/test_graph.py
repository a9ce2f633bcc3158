"""
Tests for unit loading, dual graph construction and border pruning
"""

import json

import pytest

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
from mapsplit.core.graph import (
    AdjacencyRecord,
    Votes,
    attach_votes,
    border_report,
    build_graph,
    load_adjacency,
    load_units,
    prune_short_borders,
)
from tests.conftest import TOY_UNITS
from tests.toy_graphs import make_graph, path_graph


class TestLoadUnits:
    """Tests for load_units"""

    def test_loads_every_row(self, toy_data):
        """Should return one record per row with parsed numbers"""
        units = load_units(toy_data["units"])

        assert [u.unit_id for u in units] == list("ABCDEF")
        assert sum(u.population for u in units) == 600
        assert units[0].area == 100.0
        assert units[0].bbox.max_y == 20.0

    def test_parses_vote_columns(self, toy_data):
        """Should group <contest>_dem/_rep/_ind columns by contest"""
        units = load_units(toy_data["units"])
        assert units[0].votes == {"gov": Votes(60, 40, 5)}

    def test_ind_column_is_optional(self, tmp_path):
        """Should default Independent votes to 0 when the column is absent"""
        path = tmp_path / "units.csv"
        path.write_text(
            "unit_id,population,area_km2,perimeter_km,bbox_minx,bbox_miny,bbox_maxx,bbox_maxy,"
            "sen_dem,sen_rep\nX,10,1,4,0,0,1,1,3,7\n"
        )
        assert load_units(path)[0].votes["sen"] == Votes(3, 7, 0)

    def test_single_row(self, tmp_path):
        """Should return a singleton list for a one-row file"""
        path = tmp_path / "units.csv"
        path.write_text(TOY_UNITS.splitlines()[0] + "\nA,100,100,40,0,10,10,20,60,40,5\n")
        assert len(load_units(path)) == 1

    def test_duplicate_unit_id(self, tmp_path):
        """Should reject a repeated unit_id, naming it"""
        path = tmp_path / "units.csv"
        path.write_text(
            "unit_id,population,area_km2,perimeter_km,bbox_minx,bbox_miny,bbox_maxx,bbox_maxy\n"
            "Custer,1,1,4,0,0,1,1\nCuster,2,1,4,1,0,2,1\n"
        )
        with pytest.raises(DuplicateUnitError, match="Custer"):
            load_units(path)

    def test_missing_column(self, tmp_path):
        """Should name the missing column"""
        path = tmp_path / "units.csv"
        path.write_text("unit_id,population,area_km2\nA,1,1\n")
        with pytest.raises(SchemaError, match="perimeter_km"):
            load_units(path)

    def test_non_numeric_field_reports_row(self, tmp_path):
        """Should raise a parse error carrying the row number"""
        path = tmp_path / "units.csv"
        path.write_text(
            "unit_id,population,area_km2,perimeter_km,bbox_minx,bbox_miny,bbox_maxx,bbox_maxy\n"
            "A,1,1,4,0,0,1,1\nB,many,1,4,1,0,2,1\n"
        )
        with pytest.raises(ParseError) as info:
            load_units(path)
        assert info.value.row == 2
        assert info.value.column == "population"

    def test_rejects_non_positive_area(self, tmp_path):
        """Should reject area <= 0"""
        path = tmp_path / "units.csv"
        path.write_text(
            "unit_id,population,area_km2,perimeter_km,bbox_minx,bbox_miny,bbox_maxx,bbox_maxy\n"
            "A,1,0,4,0,0,1,1\n"
        )
        with pytest.raises(ParseError, match="area_km2"):
            load_units(path)

    def test_rejects_inverted_bbox(self, tmp_path):
        """Should reject a bounding box with min >= max"""
        path = tmp_path / "units.csv"
        path.write_text(
            "unit_id,population,area_km2,perimeter_km,bbox_minx,bbox_miny,bbox_maxx,bbox_maxy\n"
            "A,1,1,4,2,0,1,1\n"
        )
        with pytest.raises(ParseError, match="bbox"):
            load_units(path)

    def test_geojson_properties(self, tmp_path):
        """Should read the same schema from GeoJSON feature properties"""
        feature = {
            "type": "Feature",
            "geometry": None,
            "properties": {
                "unit_id": "A",
                "population": 7,
                "area_km2": 2.5,
                "perimeter_km": 6.0,
                "bbox_minx": 0,
                "bbox_miny": 0,
                "bbox_maxx": 1,
                "bbox_maxy": 2.5,
            },
        }
        path = tmp_path / "units.geojson"
        path.write_text(json.dumps({"type": "FeatureCollection", "features": [feature]}))

        units = load_units(path)
        assert units[0].unit_id == "A"
        assert units[0].population == 7
        assert units[0].bbox.max_y == 2.5

    def test_missing_file(self, tmp_path):
        """Should raise a data error for a missing file"""
        with pytest.raises(DataError):
            load_units(tmp_path / "nope.csv")


class TestLoadAdjacency:
    """Tests for load_adjacency"""

    def test_loads_records(self, toy_data):
        """Should return one record per border"""
        records = load_adjacency(toy_data["adjacency"])
        assert len(records) == 8
        assert records[-1] == AdjacencyRecord("B", "D", 0.1)

    def test_rejects_self_loop(self, tmp_path):
        """Should reject a border of a unit with itself"""
        path = tmp_path / "adj.csv"
        path.write_text("unit_a,unit_b,shared_perimeter_km\nA,A,3\n")
        with pytest.raises(ParseError):
            load_adjacency(path)

    def test_rejects_repeated_pair(self, tmp_path):
        """Should reject the same unordered pair twice"""
        path = tmp_path / "adj.csv"
        path.write_text("unit_a,unit_b,shared_perimeter_km\nA,B,3\nB,A,3\n")
        with pytest.raises(DataError, match="duplicate border"):
            load_adjacency(path)

    def test_rejects_non_positive_length(self, tmp_path):
        """Should reject a zero-length border"""
        path = tmp_path / "adj.csv"
        path.write_text("unit_a,unit_b,shared_perimeter_km\nA,B,0\n")
        with pytest.raises(ParseError):
            load_adjacency(path)


class TestAttachVotes:
    """Tests for attach_votes"""

    def test_merges_contests(self, toy_data, tmp_path):
        """Should add contests from a separate file keyed by unit_id"""
        path = tmp_path / "elections.csv"
        path.write_text("unit_id,cong_dem,cong_rep,cong_ind\nA,1,2,3\n")
        units = attach_votes(load_units(toy_data["units"]), path)

        assert units[0].votes["cong"] == Votes(1, 2, 3)
        assert units[0].votes["gov"] == Votes(60, 40, 5)
        assert "cong" not in units[1].votes

    def test_unknown_unit(self, toy_data, tmp_path):
        """Should reject votes for a unit that was not loaded"""
        path = tmp_path / "elections.csv"
        path.write_text("unit_id,cong_dem,cong_rep\nNarnia,1,2\n")
        with pytest.raises(UnknownUnitError, match="Narnia"):
            attach_votes(load_units(toy_data["units"]), path)


class TestBuildGraph:
    """Tests for build_graph"""

    def test_toy_map(self, toy_data):
        """Should index units in file order and keep every border"""
        g = build_graph(load_units(toy_data["units"]), load_adjacency(toy_data["adjacency"]))

        assert g.n == 6
        assert g.m == 8
        assert g.connected
        assert g.neighbors[g.index_of["B"]] == (0, 2, 3, 4)

    def test_two_units(self):
        """Should build K2 from two units and one border"""
        g = path_graph(2)
        assert (g.n, g.m) == (2, 1)
        assert g.connected

    def test_unknown_unit(self, toy_data):
        """Should reject a border naming an unknown unit"""
        units = load_units(toy_data["units"])
        with pytest.raises(UnknownUnitError, match="Narnia"):
            build_graph(units, [AdjacencyRecord("A", "Narnia", 1.0)])

    def test_disconnected_graph_is_flagged(self):
        """Should build a disconnected graph but mark it"""
        g = make_graph(4, [(0, 1), (2, 3)])
        assert not g.connected
        with pytest.raises(StructureError):
            g.require_connected("test")

    def test_graph_id_depends_on_edges(self):
        """Should change the graph id when contiguity changes"""
        assert path_graph(4).graph_id != make_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).graph_id
        assert path_graph(4).graph_id == path_graph(4).graph_id


class TestPruneShortBorders:
    """Tests for the short-border pruning rule"""

    @staticmethod
    def _triangle(length_ab, perim_a, perim_b):
        return make_graph(
            3,
            [(0, 1, length_ab), (1, 2, 200.0), (0, 2, 200.0)],
            perimeters=[perim_a, perim_b, 1000.0],
        )

    def test_removes_short_low_share_border(self):
        """Should drop a 0.2 km border that is a tiny share of both perimeters"""
        g = self._triangle(0.2, 333.0, 667.0)
        pruned = prune_short_borders(g, 38.0, 0.10)

        assert pruned.m == 2
        assert all({e.a, e.b} != {0, 1} for e in pruned.edges)

    def test_keeps_border_longer_than_threshold(self):
        """Should keep a 39.8 km border even at a small perimeter share"""
        g = self._triangle(39.8, 917.0, 369.0)
        assert prune_short_borders(g, 38.0, 0.10).m == 3

    def test_keeps_border_large_for_one_unit(self):
        """Should keep a short border that is >= 10% of one unit's perimeter"""
        g = self._triangle(20.0, 1000.0, 150.0)
        assert prune_short_borders(g, 38.0, 0.10).m == 3

    def test_zero_length_threshold_is_identity(self, toy_data):
        """Should leave the graph unchanged with min_length = 0"""
        g = build_graph(load_units(toy_data["units"]), load_adjacency(toy_data["adjacency"]))
        assert prune_short_borders(g, 0.0, 0.10) is g

    def test_idempotent(self, toy_data):
        """Should give the same graph when applied twice"""
        g = build_graph(load_units(toy_data["units"]), load_adjacency(toy_data["adjacency"]))
        once = prune_short_borders(g, 38.0, 0.10)
        twice = prune_short_borders(once, 38.0, 0.10)

        assert once.m == 7
        assert twice.edges == once.edges

    def test_keeps_units_and_borders(self, toy_data):
        """Should only remove contiguity edges"""
        g = build_graph(load_units(toy_data["units"]), load_adjacency(toy_data["adjacency"]))
        pruned = prune_short_borders(g, 38.0, 0.10)

        assert pruned.units == g.units
        assert set(pruned.edges) <= set(g.edges)
        assert pruned.border_edges == g.border_edges

    def test_disconnecting_prune_lists_cut_off_units(self):
        """Should refuse to disconnect the graph and name the detached units"""
        g = make_graph(3, [(0, 1, 50.0), (1, 2, 0.5)], perimeters=[100.0, 100.0, 100.0])
        with pytest.raises(PruningError) as info:
            prune_short_borders(g, 38.0, 0.10)
        assert ["u2"] in info.value.components

    def test_invalid_thresholds(self):
        """Should reject thresholds out of range"""
        g = path_graph(3)
        with pytest.raises(ConfigError):
            prune_short_borders(g, -1.0, 0.1)
        with pytest.raises(ConfigError):
            prune_short_borders(g, 38.0, 1.5)


class TestBorderReport:
    """Tests for border_report"""

    def test_sorted_by_length_with_shares(self, toy_data):
        """Should list borders shortest first with perimeter percentages"""
        g = build_graph(load_units(toy_data["units"]), load_adjacency(toy_data["adjacency"]))
        rows = border_report(g, 38.0, 0.10)

        assert (rows[0].unit_a, rows[0].unit_b) == ("B", "D")
        assert rows[0].pct_a == pytest.approx(0.25)
        assert rows[0].removed
        assert not any(r.removed for r in rows[1:])
        assert [r.shared_km for r in rows] == sorted(r.shared_km for r in rows)

    def test_max_length_filter(self, toy_data):
        """Should only list borders shorter than max_length"""
        g = build_graph(load_units(toy_data["units"]), load_adjacency(toy_data["adjacency"]))
        assert len(border_report(g, 38.0, 0.10, max_length=5.0)) == 1
