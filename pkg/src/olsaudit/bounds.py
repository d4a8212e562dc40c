from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict

UPPER = "upper"
LOWER = "lower"


@dataclass
class StabilityBound:
    """A bound on the fractional stability together with its evidence.

    ``certificate`` is method specific: upper bounds carry a weight vector and
    the control coefficients it certifies, lower bounds carry per-region data.
    """

    value: float
    kind: str
    method: str
    certificate: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (UPPER, LOWER):
            raise ValueError(f"kind must be {UPPER!r} or {LOWER!r}")
