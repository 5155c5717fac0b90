"""Pass/fail records for verification suites and their text/JSON/LaTeX forms."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, List, Optional

PASS, FAIL, ERROR = "pass", "fail", "error"


@dataclass
class Check:
    name: str
    status: str
    witness: Optional[str] = None
    elapsed_ms: int = 0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == PASS


@dataclass
class VerificationReport:
    suite: str
    checks: List[Check] = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(c.status == ERROR for c in self.checks):
            return ERROR
        if all(c.status == PASS for c in self.checks):
            return PASS
        return FAIL

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def add(self, name: str, ok: bool, witness=None, detail: str = "", elapsed_ms: int = 0) -> Check:
        c = Check(name, PASS if ok else FAIL, None if ok or witness is None else str(witness),
                  elapsed_ms, detail)
        self.checks.append(c)
        return c

    def error(self, name: str, message: str, elapsed_ms: int = 0) -> Check:
        c = Check(name, ERROR, None, elapsed_ms, message)
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness, c.elapsed_ms, c.detail))

    @contextmanager
    def timed(self) -> Iterator[dict]:
        """Yield a dict; set ``ok``/``witness``/``detail`` and a check is recorded on exit."""
        slot = {"name": None, "ok": False, "witness": None, "detail": ""}
        t0 = time.perf_counter()
        yield slot
        ms = int(round((time.perf_counter() - t0) * 1000))
        self.add(slot["name"], slot["ok"], slot["witness"], slot["detail"], ms)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.status != PASS]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def to_json(report: VerificationReport, timings: bool = True) -> str:
    """JSON with fixed key order; ``timings=False`` zeroes elapsed_ms for stable diffs."""
    doc = {
        "suite": report.suite,
        "status": report.status,
        "checks": [
            {
                "name": c.name,
                "status": c.status,
                "witness": c.witness,
                "elapsed_ms": int(c.elapsed_ms) if timings else 0,
            }
            for c in report.checks
        ],
    }
    return json.dumps(doc, indent=2)


def to_text(report: VerificationReport) -> str:
    lines = [f"suite {report.suite}: {report.status.upper()}"]
    for c in report.checks:
        lines.append(f"  [{c.status.upper():5}] {c.name} ({c.elapsed_ms} ms)")
        if c.detail:
            lines.append(f"          {c.detail}")
        if c.witness:
            lines.append(f"          witness: {c.witness}")
    return "\n".join(lines)


REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "status", "checks"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "status": {"enum": [PASS, FAIL, ERROR]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "witness", "elapsed_ms"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": [PASS, FAIL, ERROR]},
                    "witness": {"type": ["string", "null"]},
                    "elapsed_ms": {"type": "integer"},
                },
            },
        },
    },
}
