"""
Borders command - shared border lengths and the pruning decision for each
"""

from argparse import ArgumentParser, Namespace

from mapsplit import config
from mapsplit.commands.base import BaseCommand
from mapsplit.core.graph import border_report, build_graph, load_adjacency, load_units
from mapsplit.core.logger import log_header, log_info, log_success, print_summary
from mapsplit.core.reports import borders_frame, write_frame
from mapsplit.core.stats import stats


class BordersCommand(BaseCommand):
    """List short borders and whether pruning drops them"""

    name = "borders"
    help = "Report shared borders by length with their perimeter shares"
    description = (
        "Lists each shared border in increasing length with the share of both units' "
        "perimeters it makes up, and flags the ones pruning removes. Writes borders.csv."
    )
    epilog = """Examples:
  mapsplit borders                      # borders shorter than 50 km
  mapsplit borders --max-length 0       # every border
"""

    def add_arguments(self, parser: ArgumentParser):
        self.add_data_arguments(parser)
        parser.add_argument(
            "--max-length",
            type=float,
            default=config.DEFAULT_BORDER_REPORT_MAX_KM,
            help=f"Only list borders shorter than this, in km; 0 lists all "
            f"(default {config.DEFAULT_BORDER_REPORT_MAX_KM:g})",
        )

    def execute(self, args: Namespace) -> bool:
        log_header("BORDER REPORT")
        cfg = self.load_run_config(args)
        graph = build_graph(
            load_units(cfg.units, cfg.units_format), load_adjacency(cfg.adjacency)
        )
        max_length = args.max_length if args.max_length and args.max_length > 0 else None
        rows = border_report(graph, cfg.graph.min_length, cfg.graph.min_fraction, max_length)
        removed = sum(1 for r in rows if r.removed)
        stats.add("borders", len(rows))
        stats.add("removed", removed)

        for row in rows:
            if row.removed:
                log_info(
                    f"{row.unit_a} / {row.unit_b}: {row.shared_km:.2f} km "
                    f"({row.pct_a:.1f}% / {row.pct_b:.1f}%) removed"
                )
        path = write_frame(cfg.output / config.BORDERS_FILE, borders_frame(rows))
        log_success(f"{len(rows)} borders listed, {removed} removed by pruning ({path})")
        print_summary()
        return True
