"""Statistics tracking for a command run"""

import time
from dataclasses import dataclass, field
from typing import Dict


@dataclass
class RunStats:
    """Counters and wall time for the command currently running"""

    start_time: float = field(default_factory=time.time)
    counters: Dict[str, int] = field(default_factory=dict)

    def reset(self):
        """Reset all statistics"""
        self.start_time = time.time()
        self.counters = {}

    def add(self, name: str, amount: int = 1):
        """Increment a named counter"""
        self.counters[name] = self.counters.get(name, 0) + amount

    def merge(self, counters: Dict[str, int]):
        """Add every counter from another mapping"""
        for name, amount in counters.items():
            self.add(name, amount)

    def get(self, name: str) -> int:
        """Current value of a counter (0 if never incremented)"""
        return self.counters.get(name, 0)

    def get_duration(self) -> float:
        """Get run duration in seconds"""
        return time.time() - self.start_time

    def get_acceptance_rate(self) -> float:
        """Accepted proposals as a percentage of chain steps"""
        steps = self.get("steps")
        if steps == 0:
            return 0.0
        return (self.get("accepted") / steps) * 100


# Global stats instance
stats = RunStats()
