"""
Output writers: count, plan manifests, metric/outcome tables, summaries,
histograms, tree-probability curve and border report.

JSON is written with sorted keys and CSV with "\\n" line endings so that
re-running a command with the same inputs gives identical files. Wall-clock
figures live only under a manifest's "timing" key.
"""

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from mapsplit.config import PROJECT_NAME, PROJECT_VERSION
from mapsplit.core.errors import OutputError
from mapsplit.core.graph import BorderRow
from mapsplit.core.metrics import METRIC_COLUMNS, PlanMetrics
from mapsplit.core.trees import ProposalDistribution

BORDER_COLUMNS = ["unit_a", "unit_b", "shared_km", "pct_a", "pct_b", "removed"]
HISTOGRAM_COLUMNS = ["bin_lo", "bin_hi", "count"]
TREEPROB_COLUMNS = ["er_score", "probability", "num_plans"]


# ============================================================================
# Primitives
# ============================================================================


def write_text(path: Path, text: str) -> Path:
    """
    Raises:
        OutputError: The file or its directory cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as exc:
        raise OutputError(path, exc) from exc
    return path


def write_json(path: Path, data: Any) -> Path:
    return write_text(path, json.dumps(data, indent=2, sort_keys=True, default=str) + "\n")


def write_frame(path: Path, frame: pd.DataFrame) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator="\n")
    except OSError as exc:
        raise OutputError(path, exc) from exc
    return path


# ============================================================================
# Tables
# ============================================================================


def metrics_frame(
    metrics: Sequence[PlanMetrics], plan_ids: Optional[Sequence[int]] = None
) -> pd.DataFrame:
    ids = range(len(metrics)) if plan_ids is None else plan_ids
    return pd.DataFrame([m.as_row(i) for i, m in zip(ids, metrics)], columns=METRIC_COLUMNS)


def histogram_frame(values: Iterable[float], bins: int) -> pd.DataFrame:
    """Fixed-width histogram over the data range"""
    data = np.asarray(list(values), dtype=float)
    counts, edges = np.histogram(data, bins=bins)
    return pd.DataFrame(
        {"bin_lo": edges[:-1], "bin_hi": edges[1:], "count": counts},
        columns=HISTOGRAM_COLUMNS,
    )


def treeprob_frame(dist: ProposalDistribution) -> pd.DataFrame:
    return pd.DataFrame(dist.rows(), columns=TREEPROB_COLUMNS)


def borders_frame(rows: Sequence[BorderRow]) -> pd.DataFrame:
    return pd.DataFrame([r._asdict() for r in rows], columns=BORDER_COLUMNS)


# ============================================================================
# Summaries
# ============================================================================


def position_in(values: Sequence[float], reference: float) -> Dict[str, float]:
    """Share of ensemble values strictly below, and at or below, a reference value"""
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        return {"below": 0.0, "at_or_below": 0.0}
    return {
        "below": float(np.mean(data < reference)),
        "at_or_below": float(np.mean(data <= reference)),
    }


def extremal_summary(metrics: Sequence[PlanMetrics]) -> Dict[str, Any]:
    """Min/max ER with the number of plans attaining each"""
    ers = [m.er for m in metrics]
    low, high = min(ers), max(ers)
    at_high = [m for m in metrics if m.er == high]
    return {
        "min_er": low,
        "min_er_plans": ers.count(low),
        "max_er": high,
        "max_er_plans": len(at_high),
        "max_er_min_pop_dev": min(float(m.pop_dev) for m in at_high),
    }


def metric_columns(metrics: Sequence[PlanMetrics]) -> Dict[str, List[float]]:
    return {
        "pop_dev": [m.pop_dev_float for m in metrics],
        "er": [float(m.er) for m in metrics],
        "pbp_min": [m.pbp_min for m in metrics],
        "pbp_mean": [m.pbp_mean for m in metrics],
        "lw_min": [m.lw_min for m in metrics],
    }


def manifest(
    command: str,
    config_echo: Dict[str, Any],
    graph: Dict[str, Any],
    results: Dict[str, Any],
    started: float,
    finished: float,
) -> Dict[str, Any]:
    return {
        "tool": PROJECT_NAME,
        "version": PROJECT_VERSION,
        "command": command,
        "config": config_echo,
        "graph": graph,
        "results": results,
        "timing": {
            "started": datetime.fromtimestamp(started, tz=timezone.utc).isoformat(),
            "wall_seconds": round(finished - started, 3),
        },
    }
