"""Wall-clock bookkeeping per pipeline phase."""
import time
from contextlib import contextmanager


class PhaseTimer:
    """Accumulates seconds spent in named phases."""

    def __init__(self):
        self.seconds: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.seconds[name] = round(self.seconds.get(name, 0.0) + elapsed, 6)
