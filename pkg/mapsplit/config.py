"""
Framework configuration for mapsplit

Defaults used when a run configuration leaves a setting out.
"""

# ============================================================================
# Framework Metadata
# ============================================================================
PROJECT_NAME = "mapsplit"
PROJECT_VERSION = "1.0.0"


# ============================================================================
# Run configuration discovery
# ============================================================================
CONFIG_FILE_NAME = "mapsplit.yaml"
CONFIG_ENV_VAR = "MAPSPLIT_CONFIG"


# ============================================================================
# Graph pruning (a border is dropped when it is shorter than MIN_LENGTH km
# and below MIN_FRACTION of both units' perimeters)
# ============================================================================
DEFAULT_PRUNE_MIN_LENGTH_KM = 38.0
DEFAULT_PRUNE_MIN_FRACTION = 0.10
DEFAULT_BORDER_REPORT_MAX_KM = 50.0


# ============================================================================
# Chain defaults
# ============================================================================
DEFAULT_MAX_TREE_RETRIES = 100
DEFAULT_THREADS = 1


# ============================================================================
# Analysis
# ============================================================================
DEFAULT_HISTOGRAM_BINS = 50
DEFAULT_VOTE_MODES = ["two_party"]
PROGRESS_EVERY = 100_000


# ============================================================================
# Output file names
# ============================================================================
OUTPUT_DIR = "results"
COUNT_FILE = "count.txt"
PLANS_FILE = "plans.pbm1"
MANIFEST_FILE = "manifest.json"
METRICS_FILE = "metrics.csv"
OUTCOMES_FILE = "outcomes_{contest}.csv"
SUMMARY_FILE = "summary.json"
TREEPROB_FILE = "treeprob.csv"
BORDERS_FILE = "borders.csv"
HISTOGRAM_FILE = "hist_{metric}.csv"
