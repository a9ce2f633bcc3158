"""
Tests for plan metrics
"""

import math
from fractions import Fraction

import pytest

from mapsplit.core.errors import GeometryError, UndefinedMetricError
from mapsplit.core.graph import prune_short_borders
from mapsplit.core.metrics import (
    METRIC_COLUMNS,
    edges_removed,
    length_width,
    polsby_popper,
    pop_deviation,
    satisfies,
    score_plan,
)
from mapsplit.core.plans import ConstraintSet, Plan
from tests.toy_graphs import grid_graph, make_graph, path_graph


def _columns(rows, cols, split):
    """Labels of a rows x cols grid cut between column split-1 and split"""
    return [0 if c < split else 1 for _ in range(rows) for c in range(cols)]


class TestPopDeviation:
    """Tests for pop_deviation"""

    def test_equal_split(self):
        """Should be 0 for equal districts"""
        g = path_graph(4)
        dev, populations = pop_deviation(g, Plan.from_labels([0, 0, 1, 1]))
        assert dev == 0
        assert populations == (200, 200)

    def test_one_fifth(self):
        """Should give 1/5 for 600,000 against 400,000"""
        g = path_graph(2, populations=[600_000, 400_000])
        dev, _ = pop_deviation(g, Plan.from_labels([0, 1]))
        assert dev == Fraction(1, 5)

    def test_odd_total_best_split(self):
        """Should give 1/total for the closest split of an odd total"""
        g = path_graph(2, populations=[542_113, 542_112])
        dev, _ = pop_deviation(g, Plan.from_labels([0, 1]))
        assert dev == Fraction(1, 1_084_225)
        assert float(dev) == pytest.approx(9.2e-7, abs=1e-8)

    def test_zero_population(self):
        """Should be undefined when nobody lives in the state"""
        g = path_graph(2, populations=[0, 0])
        with pytest.raises(UndefinedMetricError):
            pop_deviation(g, Plan.from_labels([0, 1]))


class TestEdgesRemoved:
    """Tests for edges_removed"""

    def test_path_cut_at_end(self):
        """Should cut a single edge"""
        assert edges_removed(path_graph(5), Plan.from_labels([0, 0, 0, 0, 1])) == 1

    def test_grid_rows(self):
        """Should cut the 3 vertical edges between two rows of three"""
        assert edges_removed(grid_graph(2, 3), Plan.from_labels([0, 0, 0, 1, 1, 1])) == 3

    def test_complement_of_induced_edges(self):
        """Should equal m minus the edges inside either district"""
        g = grid_graph(3, 3)
        plan = Plan.from_labels([0, 0, 1, 0, 1, 1, 0, 0, 1])
        labels = plan.labels()
        induced = sum(1 for e in g.edges if labels[e.a] == labels[e.b])
        assert edges_removed(g, plan) == g.m - induced


class TestPolsbyPopper:
    """Tests for polsby_popper"""

    def test_circles(self):
        """Should score a circle as 1"""
        g = make_graph(
            2, [(0, 1, 0.0)], areas=[math.pi, math.pi], perimeters=[2 * math.pi, 2 * math.pi]
        )
        assert polsby_popper(g, Plan.from_labels([0, 1])) == pytest.approx((1.0, 1.0))

    def test_squares_in_a_row(self):
        """Should subtract the shared border from the district perimeter"""
        g = path_graph(3)
        pbp = polsby_popper(g, Plan.from_labels([0, 1, 1]))
        assert pbp[0] == pytest.approx(math.pi / 4)
        assert pbp[1] == pytest.approx(8 * math.pi / 36)

    def test_zero_perimeter(self):
        """Should refuse a district with no perimeter"""
        g = path_graph(3, perimeters=[0.0, 4.0, 4.0])
        with pytest.raises(GeometryError, match="district 0"):
            polsby_popper(g, Plan.from_labels([0, 1, 1]))

    def test_pruning_does_not_change_perimeter(self):
        """Should use every shared border, pruned or not"""
        g = make_graph(
            5,
            [(0, 1, 50.0), (1, 2, 50.0), (2, 3, 50.0), (3, 4, 50.0), (0, 2, 0.5), (1, 3, 0.3)],
            perimeters=[200.0] * 5,
        )
        pruned = prune_short_borders(g, 38.0, 0.10)
        plan = Plan.from_labels([0, 0, 1, 1, 1])
        assert polsby_popper(pruned, plan) == pytest.approx(polsby_popper(g, plan))


class TestLengthWidth:
    """Tests for length_width"""

    def test_square_districts(self):
        """Should score square bounding boxes as 1"""
        g = grid_graph(2, 4)
        assert length_width(g, Plan.from_labels(_columns(2, 4, 2))) == pytest.approx((1.0, 1.0))

    def test_elongated_districts(self):
        """Should give 1/3 for 6 x 2 boxes"""
        g = grid_graph(2, 12)
        lw = length_width(g, Plan.from_labels(_columns(2, 12, 6)))
        assert lw == pytest.approx((1 / 3, 1 / 3))


class TestScorePlan:
    """Tests for score_plan and satisfies"""

    def test_swap_symmetry(self):
        """Should swap the per-district values when districts are swapped"""
        g = grid_graph(2, 3, populations=[10, 20, 30, 40, 50, 60])
        plan = Plan.from_labels([0, 0, 1, 0, 1, 1])
        a, b = score_plan(g, plan), score_plan(g, plan.flipped())

        assert a.pop_dev == b.pop_dev
        assert a.er == b.er
        assert a.pbp == pytest.approx(b.pbp[::-1])
        assert a.lw == pytest.approx(b.lw[::-1])
        assert a.populations == b.populations[::-1]

    def test_row_columns(self):
        """Should fill every column of the metrics table"""
        g = grid_graph(2, 4)
        row = score_plan(g, Plan.from_labels(_columns(2, 4, 2))).as_row(7)
        assert list(row) == METRIC_COLUMNS
        assert row["plan_id"] == 7
        assert row["er"] == 2
        assert row["pop_dev"] == 0.0

    def test_bounds_are_exclusive(self):
        """Should reject a plan sitting exactly on either bound"""
        g = path_graph(2, populations=[600_000, 400_000])
        plan = Plan.from_labels([0, 1])

        assert not satisfies(g, plan, ConstraintSet(max_pop_dev=0.2))
        assert satisfies(g, plan, ConstraintSet(max_pop_dev=0.21))
        assert not satisfies(g, plan, ConstraintSet(max_er=1))
        assert satisfies(g, plan, ConstraintSet(max_er=2))
        assert satisfies(g, plan, ConstraintSet())
