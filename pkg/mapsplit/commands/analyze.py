"""
Analyze command - metrics, election outcomes and summaries for a plan file
"""

import time
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from mapsplit import config
from mapsplit.commands.base import BaseCommand
from mapsplit.core.elections import (
    ElectionDataset,
    VoteMode,
    contests,
    district_shares,
    ensemble_outcomes,
    five_number_summary,
    membership_matrix,
)
from mapsplit.core.emojis import Emoji
from mapsplit.core.errors import DataError, EmptyEnsembleError
from mapsplit.core.graph import DualGraph
from mapsplit.core.logger import log_header, log_info, log_section, log_success, print_summary
from mapsplit.core.metrics import PlanMetrics, score_plan
from mapsplit.core.pipeline import load_ensemble, load_graph, load_reference
from mapsplit.core.plans import Plan
from mapsplit.core.reports import (
    extremal_summary,
    histogram_frame,
    metric_columns,
    metrics_frame,
    position_in,
    write_frame,
    write_json,
)
from mapsplit.core.run_config import RunConfig
from mapsplit.core.stats import stats


def _summaries(metrics: Sequence[PlanMetrics]) -> Dict[str, Any]:
    return {
        name: five_number_summary(values)._asdict()
        for name, values in metric_columns(metrics).items()
    }


class AnalyzeCommand(BaseCommand):
    """Score every plan of a plan file"""

    name = "analyze"
    help = "Score a plan file: metrics, election outcomes, histograms, summary"
    description = (
        "Writes metrics.csv (one row per plan), outcomes_<contest>.csv, histogram "
        "tables and summary.json. Files with repeated plans (chain output) are "
        "summarised both in full and de-duplicated."
    )
    epilog = """Examples:
  mapsplit analyze --plans results/plans.pbm1
  mapsplit analyze --plans results/plans.pbm1 --reference data/adopted.csv --mode augmented
  mapsplit analyze --plans chain/plans.pbm1 --contest cong22 --bins 30
"""

    def add_arguments(self, parser: ArgumentParser):
        self.add_data_arguments(parser)
        group = parser.add_argument_group("analysis")
        group.add_argument("--plans", type=Path, help="Plan file (.pbm1) to analyze")
        group.add_argument("--reference", type=Path, help="Reference plan to compare against")
        group.add_argument(
            "--contest", action="append", dest="contests", help="Contest to score; repeatable"
        )
        group.add_argument(
            "--mode",
            action="append",
            dest="modes",
            choices=[m.value for m in VoteMode],
            help="Share convention; repeatable (default two_party)",
        )
        group.add_argument("--bins", type=int, help="Histogram bin count")

    def config_overrides(self, args: Namespace) -> Dict[str, Any]:
        overrides = super().config_overrides(args)
        analysis: Dict[str, Any] = {}
        if args.plans is not None:
            analysis["plans"] = str(args.plans.expanduser().resolve())
        if args.reference is not None:
            analysis["reference_plan"] = str(args.reference.expanduser().resolve())
        if args.contests:
            analysis["contests"] = args.contests
        if args.modes:
            analysis["modes"] = args.modes
        if args.bins is not None:
            analysis["bins"] = args.bins
        if analysis:
            overrides["analysis"] = analysis
        return overrides

    def execute(self, args: Namespace) -> bool:
        log_header("ANALYZE PLANS")
        cfg = self.load_run_config(args)
        _, graph = load_graph(cfg)
        ensemble = load_ensemble(cfg, graph)
        if len(ensemble) == 0:
            raise EmptyEnsembleError()
        started = time.time()

        plans = list(ensemble)
        unique = ensemble.unique
        has_repeats = len(unique) < len(plans)

        log_section(f"{Emoji.STATS} Metrics")
        scored: Dict[Plan, PlanMetrics] = {p: score_plan(graph, p) for p in unique}
        full_metrics = [scored[p.canonical()] for p in plans]
        unique_metrics = [scored[p] for p in unique]
        write_frame(cfg.output / config.METRICS_FILE, metrics_frame(full_metrics))
        self._write_histograms(cfg, full_metrics, suffix="")
        if has_repeats:
            self._write_histograms(cfg, unique_metrics, suffix="_unique")
        stats.add("plans", len(plans))
        stats.add("unique_plans", len(unique))

        summary: Dict[str, Any] = {
            "plans": len(plans),
            "unique": len(unique),
            "graph": graph.describe(),
            "metrics": {"full": _summaries(full_metrics)},
            "extremal": extremal_summary(unique_metrics),
        }
        if has_repeats:
            summary["metrics"]["unique"] = _summaries(unique_metrics)

        reference: Optional[Plan] = None
        if cfg.analysis.reference_plan is not None:
            reference = load_reference(cfg, graph)
            summary["reference"] = self._reference_metrics(
                graph, reference, full_metrics, unique_metrics if has_repeats else None
            )

        elections = self._elections(cfg, graph, plans, unique, has_repeats, reference)
        if elections:
            summary["elections"] = elections

        write_json(cfg.output / config.SUMMARY_FILE, summary)
        log_success(
            f"Analyzed {len(plans):,} plans ({len(unique):,} unique) into {cfg.output}",
            time.time() - started,
        )
        print_summary()
        return True

    # ========================================================================
    # Helpers
    # ========================================================================

    @staticmethod
    def _write_histograms(cfg: RunConfig, metrics: Sequence[PlanMetrics], suffix: str):
        for name, values in metric_columns(metrics).items():
            path = cfg.output / config.HISTOGRAM_FILE.format(metric=name + suffix)
            write_frame(path, histogram_frame(values, cfg.analysis.bins))

    @staticmethod
    def _reference_metrics(
        graph: DualGraph,
        reference: Plan,
        full: Sequence[PlanMetrics],
        unique: Optional[Sequence[PlanMetrics]],
    ) -> Dict[str, Any]:
        ref = score_plan(graph, reference)
        values = {
            "pop_dev": ref.pop_dev_float,
            "er": float(ref.er),
            "pbp_min": ref.pbp_min,
            "pbp_mean": ref.pbp_mean,
            "lw_min": ref.lw_min,
        }
        full_columns = metric_columns(full)
        unique_columns = metric_columns(unique) if unique is not None else None
        result: Dict[str, Any] = {
            "plan": reference.to_hex(),
            "populations": list(ref.populations),
            "pbp": list(ref.pbp),
            "lw": list(ref.lw),
            "metrics": {},
        }
        for name, value in values.items():
            entry = {"value": value, "full": position_in(full_columns[name], value)}
            if unique_columns is not None:
                entry["unique"] = position_in(unique_columns[name], value)
            result["metrics"][name] = entry
        log_info(
            f"Reference plan: ER={ref.er}, pop_dev={ref.pop_dev_float:.3g}, "
            f"PbP min={ref.pbp_min:.3f}, LW min={ref.lw_min:.3f}"
        )
        return result

    def _elections(
        self,
        cfg: RunConfig,
        graph: DualGraph,
        plans: List[Plan],
        unique: List[Plan],
        has_repeats: bool,
        reference: Optional[Plan],
    ) -> Dict[str, Any]:
        available = contests(graph)
        selected = cfg.analysis.contests or available
        missing = [c for c in selected if c not in available]
        if missing:
            raise DataError(f"no vote data for contest(s): {', '.join(missing)}")
        if not selected:
            log_info("No election data: skipping outcomes")
            return {}

        log_section(f"{Emoji.BALLOT} Elections")
        full_members = membership_matrix(plans)
        unique_members = membership_matrix(unique) if has_repeats else None
        results: Dict[str, Any] = {}
        for contest in selected:
            frames = []
            results[contest] = {}
            for mode in cfg.analysis.modes:
                dataset = ElectionDataset.from_graph(graph, contest, mode)
                table = ensemble_outcomes(graph, plans, dataset, membership=full_members)
                frames.append(table.to_frame())
                entry: Dict[str, Any] = {"full": table.summary()}
                if unique_members is not None:
                    entry["unique"] = ensemble_outcomes(
                        graph, unique, dataset, membership=unique_members
                    ).summary()
                if reference is not None:
                    outcome = district_shares(graph, reference, dataset)
                    entry["reference"] = {
                        "shares": list(outcome.shares),
                        "dem_seats": outcome.dem_seats,
                        "share_lo_position": position_in(table.share_lo, outcome.shares[0]),
                        "share_hi_position": position_in(table.share_hi, outcome.shares[1]),
                    }
                results[contest][mode.value] = entry
                hist = entry["full"]["seat_histogram"]
                log_info(f"{contest} ({mode.value}): seats {hist}")
            write_frame(
                cfg.output / config.OUTCOMES_FILE.format(contest=contest),
                pd.concat(frames, ignore_index=True),
            )
        return results
