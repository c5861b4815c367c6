"""Machine-readable run reports shared by the CLI, the script runner and the service."""
from __future__ import annotations

import json
from typing import Optional

from pydantic import BaseModel, Field

# Exit codes: everything the front ends may return.
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class AssertionRecord(BaseModel):
    """One checked item: an assertion, a declaration, or a single command result."""
    index: int
    kind: str
    line: Optional[int] = None
    inputs: list[str] = Field(default_factory=list)
    expected: Optional[str] = None
    verdict: str
    passed: bool
    reason: str = ""
    output: Optional[str] = None
    witness: Optional[str] = None
    trace_length: int = 0
    wall_time: float = 0.0


class Summary(BaseModel):
    total: int = 0
    passed: int = 0
    failed: int = 0
    verdicts: dict[str, int] = Field(default_factory=dict)


class RunReport(BaseModel):
    command: str
    records: list[AssertionRecord] = Field(default_factory=list)
    summary: Summary = Field(default_factory=Summary)
    error: Optional[str] = None
    exit_code: int = EXIT_OK

    def add(self, kind: str, verdict: str, passed: bool, **kw) -> AssertionRecord:
        rec = AssertionRecord(index=len(self.records), kind=kind, verdict=verdict,
                              passed=passed, **kw)
        self.records.append(rec)
        self._tally()
        return rec

    def fail(self, message: str) -> "RunReport":
        """Mark the run as aborted by a usage, parse or type error."""
        self.error = message
        self.exit_code = EXIT_USAGE
        return self

    def _tally(self) -> None:
        counts: dict[str, int] = {}
        for r in self.records:
            counts[r.verdict] = counts.get(r.verdict, 0) + 1
        passed = sum(r.passed for r in self.records)
        self.summary = Summary(total=len(self.records), passed=passed,
                               failed=len(self.records) - passed,
                               verdicts=dict(sorted(counts.items())))
        if self.exit_code != EXIT_USAGE:
            self.exit_code = EXIT_OK if passed == len(self.records) else EXIT_FAIL

    def to_json(self, timing: bool = True) -> str:
        """Stable serialisation; ``timing=False`` zeroes wall times for byte comparison."""
        data = self.model_dump(mode="json")
        if not timing:
            for r in data["records"]:
                r["wall_time"] = 0.0
        return json.dumps(data, indent=2, ensure_ascii=False)
