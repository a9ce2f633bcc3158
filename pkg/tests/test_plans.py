"""
Tests for plans, constraint sets, ensembles and plan files
"""

from fractions import Fraction

import pytest

from mapsplit.core.errors import (
    ConstraintError,
    DataError,
    PlanFileError,
    UndefinedMetricError,
    UnknownUnitError,
)
from mapsplit.core.plans import (
    ConstraintSet,
    Ensemble,
    Plan,
    PopulationWindow,
    Provenance,
    as_fraction,
    load_assignment,
    load_plan_source,
    read_plans,
    write_plans,
)
from tests.toy_graphs import grid_graph, path_graph


class TestPlan:
    """Tests for the Plan bit-vector"""

    def test_from_district0(self):
        """Should set the bits of the units outside district 0"""
        plan = Plan.from_district0(0b0011, 4)
        assert plan.assignment == 0b1100
        assert plan.members(0) == (0, 1)
        assert plan.members(1) == (2, 3)

    def test_from_labels(self):
        """Should read one 0/1 label per unit"""
        plan = Plan.from_labels([0, 1, 1, 0])
        assert plan.labels() == (0, 1, 1, 0)
        with pytest.raises(ValueError):
            Plan.from_labels([0, 2])

    def test_canonical_orientation(self):
        """Should put unit 0 in district 0"""
        plan = Plan.from_labels([1, 0, 0])
        assert not plan.is_canonical
        assert plan.canonical() == Plan.from_labels([0, 1, 1])
        assert plan.canonical().canonical() == plan.canonical()

    def test_flip_swaps_districts(self):
        """Should swap the district masks"""
        plan = Plan.from_labels([0, 1, 1, 0])
        assert plan.flipped().district_mask(0) == plan.district_mask(1)
        assert plan.flipped().flipped() == plan

    def test_hex_is_district0_mask(self):
        """Should encode district 0 as a hex bitmask"""
        assert Plan.from_district0(0b10011, 5).to_hex() == "13"


class TestPopulationWindow:
    """Tests for the exact population window"""

    def test_one_percent_of_montana(self):
        """Should give the strict integer bounds around 542,112.5 +/- 5,421.125"""
        window = PopulationWindow.from_bound(1_084_225, Fraction(1, 100))
        assert window.lo == 536_692
        assert window.hi == 547_533

    def test_matches_exact_inequality(self):
        """Should contain p exactly when |total - 2p| / total < bound"""
        bounds = [Fraction(1, 100), Fraction(1, 10), Fraction(1, 3), Fraction(1, 2), Fraction(1)]
        for total in range(1, 60):
            for bound in bounds:
                window = PopulationWindow.from_bound(total, bound)
                for p in range(total + 1):
                    expected = Fraction(abs(total - 2 * p), total) < bound
                    assert window.contains(p) == expected, (total, bound, p)

    def test_symmetric(self):
        """Should satisfy lo = total - hi"""
        window = PopulationWindow.from_bound(1001, Fraction(3, 100))
        assert window.lo == 1001 - window.hi

    def test_zero_total(self):
        """Should reject a zero total population"""
        with pytest.raises(UndefinedMetricError):
            PopulationWindow.from_bound(0, Fraction(1, 10))


class TestConstraintSet:
    """Tests for ConstraintSet validation"""

    def test_decimal_bounds_are_exact(self):
        """Should read 0.03 as exactly 3/100"""
        assert as_fraction(0.03) == Fraction(3, 100)
        assert ConstraintSet(max_pop_dev=0.03).max_pop_dev == Fraction(3, 100)

    def test_empty(self):
        """Should represent the trivially true constraint set"""
        c = ConstraintSet()
        assert c.is_empty
        assert c.window(100) is None

    @pytest.mark.parametrize("value", [0, -0.1, 1.5])
    def test_rejects_pop_dev_out_of_range(self, value):
        """Should require max_pop_dev in (0, 1]"""
        with pytest.raises(ConstraintError):
            ConstraintSet(max_pop_dev=value)

    @pytest.mark.parametrize("value", [0, -3, 2.5, True])
    def test_rejects_bad_max_er(self, value):
        """Should require a positive integer max_er"""
        with pytest.raises(ConstraintError):
            ConstraintSet(max_er=value)

    def test_from_dict_rejects_unknown_keys(self):
        """Should reject keys other than max_pop_dev and max_er"""
        with pytest.raises(ConstraintError, match="max_dev"):
            ConstraintSet.from_dict({"max_dev": 0.1})

    def test_round_trip_to_dict(self):
        """Should echo the bounds as plain numbers"""
        c = ConstraintSet.from_dict({"max_pop_dev": 0.03, "max_er": 22})
        assert c.to_dict() == {"max_pop_dev": 0.03, "max_er": 22}


class TestEnsemble:
    """Tests for Ensemble bookkeeping"""

    def test_unique_keeps_first_occurrence(self):
        """Should reduce [P, P, Q, P] to [P, Q]"""
        p = Plan.from_labels([0, 1, 1])
        q = Plan.from_labels([0, 0, 1])
        e = Ensemble(plans=list(enumerate([p, p, q, p])), provenance=Provenance.CHAIN)

        assert len(e) == 4
        assert e.unique == [p, q]

    def test_unique_identifies_flipped_plans(self):
        """Should treat a plan and its flip as the same partition"""
        p = Plan.from_labels([0, 1, 1])
        e = Ensemble(plans=[(0, p), (1, p.flipped())], provenance=Provenance.CHAIN)
        assert e.unique == [p]

    def test_first_occurrences_keep_step_index(self):
        """Should pair each distinct plan with the step it first appeared at"""
        p = Plan.from_labels([0, 1, 1])
        q = Plan.from_labels([0, 0, 1])
        e = Ensemble(plans=[(5, p), (6, q.flipped()), (7, p)], provenance=Provenance.CHAIN)
        assert e.first_occurrences == [(5, p), (6, q)]
        assert e.unique == [p, q]


class TestPlanFiles:
    """Tests for the .pbm1 plan-list format"""

    def test_write_and_read(self, tmp_path):
        """Should read back the plans it wrote, in order"""
        g = path_graph(5)
        plans = [Plan.from_district0(mask, 5, g.graph_id) for mask in (0b00001, 0b00111)]
        path = tmp_path / "plans.pbm1"

        assert write_plans(path, g, plans) == 2
        assert path.read_text().splitlines() == [
            f"#pbm1 n=5 graph={g.graph_id} source=file",
            "1",
            "7",
        ]

        e = read_plans(path, g)
        assert e.provenance is Provenance.FILE
        assert list(e) == plans

    def test_provenance_round_trip(self, tmp_path):
        """Should read back the origin recorded by the writer"""
        g = path_graph(4)
        path = tmp_path / "plans.pbm1"
        write_plans(path, g, [Plan.from_district0(0b0011, 4, g.graph_id)], Provenance.ENUMERATED)

        assert path.read_text().splitlines()[0].endswith(" source=enumerated")
        assert read_plans(path, g).provenance is Provenance.ENUMERATED

    def test_rejects_unknown_source(self, tmp_path):
        """Should treat an unknown source field as a malformed header"""
        path = tmp_path / "plans.pbm1"
        path.write_text("#pbm1 n=4 source=oracle\n1\n")
        with pytest.raises(PlanFileError, match="malformed header"):
            read_plans(path, path_graph(4))

    def test_header_only_file_is_empty(self, tmp_path):
        """Should read a header-only file as an empty ensemble"""
        path = tmp_path / "plans.pbm1"
        path.write_text("#pbm1 n=4\n")
        assert len(read_plans(path, path_graph(4))) == 0

    def test_rejects_other_unit_count(self, tmp_path):
        """Should reject plans for a graph with a different n"""
        path = tmp_path / "plans.pbm1"
        path.write_text("#pbm1 n=3\n1\n")
        with pytest.raises(PlanFileError, match="n=3"):
            read_plans(path, path_graph(4))

    def test_rejects_other_graph(self, tmp_path):
        """Should reject plans written for another graph id"""
        path = tmp_path / "plans.pbm1"
        path.write_text("#pbm1 n=4 graph=abcdef012345\n1\n")
        with pytest.raises(PlanFileError, match="abcdef012345"):
            read_plans(path, path_graph(4))
        assert len(read_plans(path, path_graph(4), strict=False)) == 1

    def test_rejects_bad_lines(self, tmp_path):
        """Should reject non-hex lines and empty or full district 0"""
        g = path_graph(4)
        for body in ("zz\n", "0\n", "f\n"):
            path = tmp_path / "plans.pbm1"
            path.write_text(f"#pbm1 n=4 graph={g.graph_id}\n{body}")
            with pytest.raises(PlanFileError, match="line 2"):
                read_plans(path, g)

    def test_rejects_non_contiguous_plans(self, tmp_path):
        """Should reject a plan with either district split in two"""
        g = path_graph(4)
        for body in ("5\n", "6\n"):
            path = tmp_path / "plans.pbm1"
            path.write_text(f"#pbm1 n=4 graph={g.graph_id}\n3\n{body}")
            with pytest.raises(PlanFileError, match="line 3: a district is not contiguous"):
                read_plans(path, g)

    def test_rejects_missing_header(self, tmp_path):
        """Should require the #pbm1 header"""
        path = tmp_path / "plans.pbm1"
        path.write_text("1\n2\n")
        with pytest.raises(PlanFileError, match="header"):
            read_plans(path, path_graph(4))


class TestLoadAssignment:
    """Tests for unit_id,district assignment files"""

    def test_unit0_district_becomes_district0(self, tmp_path):
        """Should map the district holding unit 0 to district 0"""
        g = path_graph(3)
        path = tmp_path / "plan.csv"
        path.write_text("unit_id,district\nu0,East\nu1,West\nu2,West\n")

        plan = load_assignment(path, g)
        assert plan.labels() == (0, 1, 1)
        assert plan.graph_id == g.graph_id

    def test_load_plan_source_dispatches_on_suffix(self, tmp_path):
        """Should read CSV assignments and plan files alike"""
        g = grid_graph(2, 2)
        path = tmp_path / "plan.csv"
        path.write_text("unit_id,district\nu0,1\nu1,1\nu2,2\nu3,2\n")
        assert load_plan_source(path, g) == [Plan.from_labels([0, 0, 1, 1], g.graph_id)]

    def test_unknown_unit(self, tmp_path):
        """Should reject units that are not in the graph"""
        path = tmp_path / "plan.csv"
        path.write_text("unit_id,district\nu0,a\nNarnia,b\n")
        with pytest.raises(UnknownUnitError):
            load_assignment(path, path_graph(2))

    def test_missing_unit(self, tmp_path):
        """Should require a district for every unit"""
        path = tmp_path / "plan.csv"
        path.write_text("unit_id,district\nu0,a\nu1,b\n")
        with pytest.raises(DataError, match="u2"):
            load_assignment(path, path_graph(3))

    def test_requires_two_districts(self, tmp_path):
        """Should reject one or three district labels"""
        path = tmp_path / "plan.csv"
        path.write_text("unit_id,district\nu0,a\nu1,b\nu2,c\n")
        with pytest.raises(DataError, match="2 districts"):
            load_assignment(path, path_graph(3))
