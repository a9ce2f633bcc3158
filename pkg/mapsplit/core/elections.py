"""
Election scoring of plans

Per-district Democratic share (two-party or augmented with Independent
votes), seats won, and ensemble-level distributions.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from mapsplit.core.errors import DataError, EmptyEnsembleError, UndefinedMetricError
from mapsplit.core.graph import DualGraph, Votes
from mapsplit.core.plans import Plan

OUTCOME_COLUMNS = ["plan_id", "contest", "mode", "share_lo", "share_hi", "dem_seats"]


class VoteMode(str, Enum):
    TWO_PARTY = "two_party"
    AUGMENTED = "augmented"


# ============================================================================
# Datasets
# ============================================================================


@dataclass(frozen=True)
class ElectionDataset:
    """
    One contest's votes per unit, in unit index order.

    Attributes:
        contest_id: Contest name (the column prefix in the data)
        votes: (dem, rep, ind) per unit
        mode: Share convention
    """

    contest_id: str
    votes: Tuple[Votes, ...]
    mode: VoteMode = VoteMode.TWO_PARTY

    def __post_init__(self):
        object.__setattr__(self, "mode", VoteMode(self.mode))
        for v in self.votes:
            if min(v) < 0:
                raise DataError(f"{self.contest_id}: negative vote count {tuple(v)}")
        if not any(v.dem + v.rep > 0 for v in self.votes):
            raise UndefinedMetricError(
                f"{self.contest_id}: no unit has Democratic or Republican votes"
            )

    @classmethod
    def from_graph(
        cls, g: DualGraph, contest_id: str, mode=VoteMode.TWO_PARTY
    ) -> "ElectionDataset":
        """
        Raises:
            DataError: A unit has no votes for ``contest_id``
        """
        votes = []
        for unit in g.units:
            if contest_id not in unit.votes:
                raise DataError(f"contest {contest_id!r} has no votes for unit {unit.unit_id}")
            votes.append(unit.votes[contest_id])
        return cls(contest_id, tuple(votes), mode)

    @property
    def numerators(self) -> np.ndarray:
        """Votes counted for the Democratic side, per unit"""
        if self.mode is VoteMode.AUGMENTED:
            return np.array([v.dem + v.ind for v in self.votes], dtype=np.int64)
        return np.array([v.dem for v in self.votes], dtype=np.int64)

    @property
    def denominators(self) -> np.ndarray:
        """Votes in the share's denominator, per unit"""
        if self.mode is VoteMode.AUGMENTED:
            return np.array([v.dem + v.ind + v.rep for v in self.votes], dtype=np.int64)
        return np.array([v.dem + v.rep for v in self.votes], dtype=np.int64)

    def with_mode(self, mode) -> "ElectionDataset":
        return ElectionDataset(self.contest_id, self.votes, VoteMode(mode))


def contests(g: DualGraph) -> List[str]:
    """Contests with votes on every unit, in first-seen order"""
    if not g.units:
        return []
    names = list(g.units[0].votes)
    return [c for c in names if all(c in u.votes for u in g.units)]


# ============================================================================
# Outcomes
# ============================================================================


class ElectionOutcome(NamedTuple):
    """
    Attributes:
        shares: (smaller, larger) Democratic share
        dem_seats: Districts with share strictly above 1/2
        proportional_seats: Twice the statewide share
    """

    shares: Tuple[float, float]
    dem_seats: int
    proportional_seats: float


def _share(num: int, den: int, what: str) -> float:
    if den == 0:
        raise UndefinedMetricError(f"{what}: no votes in the share denominator")
    return num / den


def proportionality_reference(e: ElectionDataset) -> float:
    """Seats a statewide-proportional result would give out of 2"""
    return 2.0 * _share(int(e.numerators.sum()), int(e.denominators.sum()), e.contest_id)


def district_votes(e: ElectionDataset, p: Plan) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """(numerator, denominator) per district"""
    num, den = e.numerators, e.denominators
    labels = np.array(p.labels(), dtype=bool)
    return (
        (int(num[~labels].sum()), int(den[~labels].sum())),
        (int(num[labels].sum()), int(den[labels].sum())),
    )


def district_shares(g: DualGraph, p: Plan, e: ElectionDataset) -> ElectionOutcome:
    """
    Raises:
        UndefinedMetricError: A district has no votes in the share denominator
    """
    if len(e.votes) != g.n:
        raise DataError(f"{e.contest_id}: votes for {len(e.votes)} units, graph has {g.n}")
    per_district = district_votes(e, p)
    shares = [
        _share(num, den, f"{e.contest_id} district {d}")
        for d, (num, den) in enumerate(per_district)
    ]
    seats = sum(1 for num, den in per_district if 2 * num > den)
    return ElectionOutcome(
        shares=(min(shares), max(shares)),
        dem_seats=seats,
        proportional_seats=proportionality_reference(e),
    )


# ============================================================================
# Ensembles
# ============================================================================


class FiveNumber(NamedTuple):
    min: float
    q1: float
    median: float
    q3: float
    max: float


def _median(values: Sequence[float]) -> float:
    size = len(values)
    mid = size // 2
    if size % 2:
        return float(values[mid])
    return (values[mid - 1] + values[mid]) / 2


def five_number_summary(values: Sequence[float]) -> FiveNumber:
    """
    Min, hinges, median and max. The hinges are the medians of the lower and
    upper halves, each half including the median when the count is odd.
    """
    ordered = sorted(values)
    size = len(ordered)
    if size == 0:
        raise EmptyEnsembleError()
    return FiveNumber(
        min=float(ordered[0]),
        q1=_median(ordered[: (size + 1) // 2]),
        median=_median(ordered),
        q3=_median(ordered[size // 2 :]),
        max=float(ordered[-1]),
    )


def membership_matrix(plans: Sequence[Plan]) -> np.ndarray:
    """Plans x units 0/1 matrix (1 = district 1)"""
    if not plans:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array([p.labels() for p in plans], dtype=np.int64)


@dataclass
class OutcomeTable:
    """Per-plan outcomes of one contest"""

    contest_id: str
    mode: VoteMode
    share_lo: np.ndarray
    share_hi: np.ndarray
    dem_seats: np.ndarray
    proportional_seats: float

    def __len__(self) -> int:
        return len(self.dem_seats)

    def outcome(self, i: int) -> ElectionOutcome:
        return ElectionOutcome(
            (float(self.share_lo[i]), float(self.share_hi[i])),
            int(self.dem_seats[i]),
            self.proportional_seats,
        )

    def seat_histogram(self) -> Dict[int, int]:
        counts = np.bincount(self.dem_seats, minlength=3)
        return {seats: int(counts[seats]) for seats in range(3)}

    def summary(self) -> Dict[str, object]:
        if len(self) == 0:
            raise EmptyEnsembleError()
        return {
            "contest": self.contest_id,
            "mode": self.mode.value,
            "plans": len(self),
            "district_1": five_number_summary(self.share_lo.tolist())._asdict(),
            "district_2": five_number_summary(self.share_hi.tolist())._asdict(),
            "seat_histogram": self.seat_histogram(),
            "proportional_seats": self.proportional_seats,
        }

    def to_frame(self, plan_ids: Optional[Sequence[int]] = None) -> pd.DataFrame:
        ids = list(range(len(self))) if plan_ids is None else list(plan_ids)
        return pd.DataFrame(
            {
                "plan_id": ids,
                "contest": self.contest_id,
                "mode": self.mode.value,
                "share_lo": self.share_lo,
                "share_hi": self.share_hi,
                "dem_seats": self.dem_seats,
            },
            columns=OUTCOME_COLUMNS,
        )


def ensemble_outcomes(
    g: DualGraph,
    plans: Sequence[Plan],
    e: ElectionDataset,
    membership: Optional[np.ndarray] = None,
) -> OutcomeTable:
    """
    Outcomes of every plan, in plan order.

    Args:
        membership: Precomputed ``membership_matrix(plans)`` to share across contests

    Raises:
        EmptyEnsembleError: No plans
        UndefinedMetricError: Some district of some plan has an empty denominator
    """
    plans = list(plans)
    if not plans:
        raise EmptyEnsembleError()
    if len(e.votes) != g.n:
        raise DataError(f"{e.contest_id}: votes for {len(e.votes)} units, graph has {g.n}")
    if membership is None:
        membership = membership_matrix(plans)

    num, den = e.numerators, e.denominators
    num1, den1 = membership @ num, membership @ den
    num0, den0 = num.sum() - num1, den.sum() - den1
    if (den0 == 0).any() or (den1 == 0).any():
        raise UndefinedMetricError(
            f"{e.contest_id}: a district has no votes in the share denominator"
        )

    share0, share1 = num0 / den0, num1 / den1
    seats = (2 * num0 > den0).astype(np.int64) + (2 * num1 > den1).astype(np.int64)
    return OutcomeTable(
        contest_id=e.contest_id,
        mode=e.mode,
        share_lo=np.minimum(share0, share1),
        share_hi=np.maximum(share0, share1),
        dem_seats=seats,
        proportional_seats=proportionality_reference(e),
    )
