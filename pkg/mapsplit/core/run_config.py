"""
Run configuration

The YAML schema (every section optional unless a command needs it)::

    data:
      units: data/units.csv          # or .geojson
      adjacency: data/adjacency.csv
      elections: data/elections.csv  # extra vote columns keyed by unit_id
    graph:
      prune: true
      min_length: 38.0
      min_fraction: 0.10
    constraints:
      max_pop_dev: 0.03
      max_er: 22
    chain:
      steps: 100000
      rng_seed: 2023
      seeds: [data/adopted.csv]
      random_seeds: {from: results/plans.pbm1, count: 4}
      accept: {policy: always}
      max_tree_retries: 100
      threads: 1
    analysis:
      plans: results/plans.pbm1
      reference_plan: data/adopted.csv
      contests: []                   # empty = every contest in the data
      modes: [two_party, augmented]
      bins: 50
    output: results
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from mapsplit import config
from mapsplit.core.discovery import deep_merge
from mapsplit.core.elections import VoteMode
from mapsplit.core.errors import ConfigError
from mapsplit.core.plans import ConstraintSet
from mapsplit.core.recom import PRESETS, AcceptPolicy, accept_policy_from_dict

MODES = ("count", "enumerate", "chain", "analyze", "treeprob", "borders")

_SECTIONS = {"data", "graph", "constraints", "chain", "analysis", "output", "preset"}


def apply_preset(data: Dict[str, Any]) -> Dict[str, Any]:
    """Expand a ``preset`` key: the preset is the base, the mapping's own keys win"""
    name = data.get("preset")
    if name is None:
        return data
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r} (choose from {', '.join(sorted(PRESETS))})")
    rest = {k: v for k, v in data.items() if k != "preset"}
    return deep_merge(PRESETS[name], rest)


def _section(data: Dict[str, Any], name: str) -> Dict[str, Any]:
    value = data.get(name) or {}
    if not isinstance(value, dict):
        raise ConfigError(f"'{name}' must be a mapping")
    return value


def _path(value: Any, base_dir: Path) -> Optional[Path]:
    if value in (None, ""):
        return None
    path = Path(str(value)).expanduser()
    return path if path.is_absolute() else (base_dir / path).resolve()


def _int(value: Any, name: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be an integer (got {value!r})")
    try:
        result = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer (got {value!r})") from None
    if result != value and not isinstance(value, str):
        raise ConfigError(f"{name} must be an integer (got {value!r})")
    return result


def _optional_int(value: Any, name: str) -> Optional[int]:
    return None if value is None else _int(value, name)


@dataclass
class GraphOptions:
    prune: bool = True
    min_length: float = config.DEFAULT_PRUNE_MIN_LENGTH_KM
    min_fraction: float = config.DEFAULT_PRUNE_MIN_FRACTION


@dataclass
class ChainSettings:
    steps: Optional[int] = None
    rng_seed: Optional[int] = None
    seeds: List[Path] = field(default_factory=list)
    random_seeds_from: Optional[Path] = None
    random_seeds_count: int = 0
    accept: AcceptPolicy = field(default_factory=lambda: accept_policy_from_dict(None))
    max_tree_retries: int = config.DEFAULT_MAX_TREE_RETRIES
    threads: int = config.DEFAULT_THREADS


@dataclass
class AnalysisSettings:
    plans: Optional[Path] = None
    reference_plan: Optional[Path] = None
    contests: List[str] = field(default_factory=list)
    modes: List[VoteMode] = field(
        default_factory=lambda: [VoteMode(m) for m in config.DEFAULT_VOTE_MODES]
    )
    bins: int = config.DEFAULT_HISTOGRAM_BINS


@dataclass
class RunConfig:
    """
    Validated settings of one command run.

    Attributes:
        mode: The command being run
        units, adjacency, elections: Input data files
        graph: Pruning options
        constraints: Hard constraints
        chain: Chain settings (chain mode)
        analysis: Analysis settings (analyze/treeprob modes)
        output: Output directory
        source: Config file the settings came from (None for flags only)
        raw: The merged mapping, echoed into manifests
    """

    mode: str
    units: Optional[Path]
    adjacency: Optional[Path]
    elections: Optional[Path] = None
    units_format: Optional[str] = None
    graph: GraphOptions = field(default_factory=GraphOptions)
    constraints: ConstraintSet = field(default_factory=ConstraintSet)
    chain: ChainSettings = field(default_factory=ChainSettings)
    analysis: AnalysisSettings = field(default_factory=AnalysisSettings)
    output: Path = field(default_factory=lambda: Path(config.OUTPUT_DIR).resolve())
    source: Optional[Path] = None
    raw: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_mapping(
        cls, data: Dict[str, Any], mode: str, base_dir: Path, source: Optional[Path] = None
    ) -> "RunConfig":
        """
        Build and validate a RunConfig from a merged YAML/flag mapping.

        Args:
            data: Merged configuration mapping
            mode: Command being run (one of MODES)
            base_dir: Directory relative paths resolve against

        Raises:
            ConfigError: Unknown keys, bad values or missing inputs
        """
        if mode not in MODES:
            raise ConfigError(f"unknown mode {mode!r}")
        data = apply_preset(data)
        unknown = set(data) - _SECTIONS
        if unknown:
            raise ConfigError(f"unknown config sections: {', '.join(sorted(unknown))}")

        data_section = _section(data, "data")
        graph_section = _section(data, "graph")
        chain_section = _section(data, "chain")
        analysis_section = _section(data, "analysis")

        graph = GraphOptions(
            prune=bool(graph_section.get("prune", True)),
            min_length=float(
                graph_section.get("min_length", config.DEFAULT_PRUNE_MIN_LENGTH_KM)
            ),
            min_fraction=float(
                graph_section.get("min_fraction", config.DEFAULT_PRUNE_MIN_FRACTION)
            ),
        )

        random_seeds = chain_section.get("random_seeds") or {}
        if not isinstance(random_seeds, dict):
            raise ConfigError("chain.random_seeds must be a mapping with 'from' and 'count'")
        chain = ChainSettings(
            steps=_optional_int(chain_section.get("steps"), "chain.steps"),
            rng_seed=_optional_int(chain_section.get("rng_seed"), "chain.rng_seed"),
            seeds=[_path(s, base_dir) for s in chain_section.get("seeds") or []],
            random_seeds_from=_path(random_seeds.get("from"), base_dir),
            random_seeds_count=_int(random_seeds.get("count", 0), "chain.random_seeds.count"),
            accept=accept_policy_from_dict(chain_section.get("accept")),
            max_tree_retries=_int(
                chain_section.get("max_tree_retries", config.DEFAULT_MAX_TREE_RETRIES),
                "chain.max_tree_retries",
            ),
            threads=_int(chain_section.get("threads", config.DEFAULT_THREADS), "chain.threads"),
        )

        try:
            names = analysis_section.get("modes") or config.DEFAULT_VOTE_MODES
            modes = [VoteMode(m) for m in names]
        except ValueError as e:
            raise ConfigError(f"analysis.modes: {e}") from None
        analysis = AnalysisSettings(
            plans=_path(analysis_section.get("plans"), base_dir),
            reference_plan=_path(analysis_section.get("reference_plan"), base_dir),
            contests=[str(c) for c in analysis_section.get("contests") or []],
            modes=modes,
            bins=_int(analysis_section.get("bins", config.DEFAULT_HISTOGRAM_BINS), "analysis.bins"),
        )

        cfg = cls(
            mode=mode,
            units=_path(data_section.get("units"), base_dir),
            adjacency=_path(data_section.get("adjacency"), base_dir),
            elections=_path(data_section.get("elections"), base_dir),
            units_format=data_section.get("units_format"),
            graph=graph,
            constraints=ConstraintSet.from_dict(_section(data, "constraints")),
            chain=chain,
            analysis=analysis,
            output=_path(data.get("output") or config.OUTPUT_DIR, base_dir),
            source=source,
            raw=data,
        )
        cfg.validate()
        return cfg

    def validate(self):
        """
        Raises:
            ConfigError: A setting the mode needs is missing or out of range
        """
        self._require_file(self.units, "data.units")
        self._require_file(self.adjacency, "data.adjacency")
        if self.elections is not None:
            self._require_file(self.elections, "data.elections")

        if self.graph.min_length < 0:
            raise ConfigError(f"graph.min_length must be >= 0 (got {self.graph.min_length})")
        if not 0 < self.graph.min_fraction < 1:
            raise ConfigError(
                f"graph.min_fraction must lie in (0, 1) (got {self.graph.min_fraction})"
            )

        if self.mode == "chain":
            self._validate_chain()
        if self.mode in ("analyze", "treeprob"):
            self._require_file(self.analysis.plans, "analysis.plans")
            if self.analysis.bins < 1:
                raise ConfigError(f"analysis.bins must be >= 1 (got {self.analysis.bins})")
            if self.analysis.reference_plan is not None:
                self._require_file(self.analysis.reference_plan, "analysis.reference_plan")

    def _validate_chain(self):
        chain = self.chain
        if chain.steps is None or chain.steps < 1:
            raise ConfigError("chain.steps must be a positive integer")
        if chain.rng_seed is None:
            raise ConfigError("chain.rng_seed is required (randomised runs need an explicit seed)")
        if not 0 <= chain.rng_seed < 2**64:
            raise ConfigError("chain.rng_seed must be a non-negative 64-bit integer")
        for i, seed in enumerate(chain.seeds):
            self._require_file(seed, f"chain.seeds[{i}]")
        if chain.random_seeds_count < 0:
            raise ConfigError("chain.random_seeds.count must be >= 0")
        if chain.random_seeds_count > 0:
            self._require_file(chain.random_seeds_from, "chain.random_seeds.from")
        if not chain.seeds and chain.random_seeds_count == 0:
            raise ConfigError("chain needs at least one seed (chain.seeds or chain.random_seeds)")
        if chain.max_tree_retries < 1:
            raise ConfigError("chain.max_tree_retries must be >= 1")
        if chain.threads < 1:
            raise ConfigError("chain.threads must be >= 1")

    @staticmethod
    def _require_file(path: Optional[Path], key: str):
        if path is None:
            raise ConfigError(f"{key} is required")
        if not path.is_file():
            raise ConfigError(f"{key}: file not found: {path}")
