"""Reports produced by the verification campaigns and the CLI."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

__all__ = ["COUNTEREXAMPLE", "EXIT_CODES", "FAIL", "PASS", "UNKNOWN", "Report"]

PASS = "pass"
FAIL = "fail"
COUNTEREXAMPLE = "counterexample"
UNKNOWN = "unknown"

EXIT_CODES = {PASS: 0, FAIL: 1, COUNTEREXAMPLE: 1, UNKNOWN: 3}


def _plain(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


@dataclass
class Report:
    command: str
    params: dict = field(default_factory=dict)
    status: str = PASS
    data: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    elapsed: float = 0.0
    _start: float = field(default_factory=time.perf_counter, repr=False)

    @property
    def ok(self):
        return self.status == PASS

    @property
    def exit_code(self):
        return EXIT_CODES[self.status]

    def finish(self, status=None):
        if status is not None:
            self.status = status
        self.elapsed = round(time.perf_counter() - self._start, 3)
        return self

    def to_json(self):
        return {
            "command": self.command,
            "params": _plain(self.params),
            "status": self.status,
            "data": _plain(self.data),
            "counts": _plain(self.counts),
            "elapsed": self.elapsed,
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def summary(self):
        counts = ", ".join(f"{k}={v}" for k, v in self.counts.items())
        return f"{self.command}: {self.status}" + (f" ({counts})" if counts else "") + f" in {self.elapsed:.2f}s"
