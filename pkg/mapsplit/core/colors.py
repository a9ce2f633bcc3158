"""ANSI colors for log lines written to stderr"""

import os
import sys
from typing import Dict, Optional, TextIO

_CODES: Dict[str, str] = {
    "RED": "\033[91m",
    "GREEN": "\033[92m",
    "YELLOW": "\033[93m",
    "BLUE": "\033[94m",
    "MAGENTA": "\033[95m",
    "CYAN": "\033[96m",
    "WHITE": "\033[97m",
    "BOLD": "\033[1m",
    "RESET": "\033[0m",
}


class Colors:
    """Escape codes as class attributes; empty strings once disabled"""

    RED = _CODES["RED"]
    GREEN = _CODES["GREEN"]
    YELLOW = _CODES["YELLOW"]
    BLUE = _CODES["BLUE"]
    MAGENTA = _CODES["MAGENTA"]
    CYAN = _CODES["CYAN"]
    WHITE = _CODES["WHITE"]
    BOLD = _CODES["BOLD"]
    RESET = _CODES["RESET"]

    @staticmethod
    def disable():
        for name in _CODES:
            setattr(Colors, name, "")

    @staticmethod
    def enable():
        for name, code in _CODES.items():
            setattr(Colors, name, code)

    @staticmethod
    def auto_disable(stream: Optional[TextIO] = None):
        """Disable colors when NO_COLOR is set or the log stream is not a terminal"""
        stream = stream or sys.stderr
        if os.getenv("NO_COLOR") is not None or not stream.isatty():
            Colors.disable()
        else:
            Colors.enable()
