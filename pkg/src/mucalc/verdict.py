from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

EQUAL, DISTINCT, UNKNOWN = "equal", "distinct", "unknown"


@dataclass(frozen=True)
class Step:
    rule: str
    position: str


@dataclass
class Verdict:
    """Outcome of an equivalence check with the rewrite traces of both sides."""
    outcome: str
    reason: str = ""
    left_trace: list[Step] = field(default_factory=list)
    right_trace: list[Step] = field(default_factory=list)
    witness: Optional[str] = None

    @property
    def equal(self) -> bool:
        return self.outcome == EQUAL

    @property
    def distinct(self) -> bool:
        return self.outcome == DISTINCT

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "reason": self.reason,
            "trace_length": len(self.left_trace) + len(self.right_trace),
            "witness": self.witness,
        }
