"""Icon definitions for terminal output"""


class Emoji:
    """
    Icons prefixed to log lines.

    Plain Unicode so they render without patched fonts.
    """

    # ============================================================================
    # Status Indicators
    # ============================================================================
    SUCCESS = "✔"
    ERROR = "✘"
    WARNING = "⚠"
    INFO = "ℹ"

    # ============================================================================
    # Sections
    # ============================================================================
    ROCKET = "🚀"
    PACKAGE = "📦"
    STATS = "📊"
    TIME = "⏱"

    # ============================================================================
    # Domain
    # ============================================================================
    GRAPH = "🗺"
    COUNT = "🔢"
    CHAIN = "🔗"
    TREE = "🌲"
    BALLOT = "🗳"
    FLOPPY = "💾"
