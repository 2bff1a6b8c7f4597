from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of a numeric verification.

    Attributes:
        name: Short identifier of the check.
        passed: Whether every asserted condition held.
        metrics: Named finite real values (deviations, margins, values).
        notes: Free text, e.g. flags for degenerate cases.
    """

    name: str
    passed: bool
    metrics: dict[str, float] = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        for key, value in self.metrics.items():
            if not math.isfinite(value):
                raise ValueError(f"metric {key!r} is not finite: {value}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "metrics": dict(sorted(self.metrics.items())),
            "notes": self.notes,
        }
