"""Congruence check records and their JSON/CSV serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

REPORT_KEYS = (
    "theorem_id", "n", "m", "p", "r", "modulus", "lhs", "rhs",
    "pass", "skipped", "note", "runtime_ms",
)


@dataclass
class CongruenceReport:
    theorem_id: str
    n: int
    m: int
    p: int
    r: int
    modulus: int = 0
    lhs: Optional[int] = None
    rhs: Optional[int] = None
    passed: bool = False
    skipped: bool = False
    note: str = ""
    runtime_ms: Optional[float] = None

    def __post_init__(self):
        if self.skipped:
            self.passed = False
        elif self.lhs is not None and self.rhs is not None:
            self.lhs %= self.modulus
            self.rhs %= self.modulus
            self.passed = self.lhs == self.rhs

    @property
    def sort_key(self):
        return (self.theorem_id, self.n, self.m, self.p, self.r, self.note)

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "n": self.n,
            "m": self.m,
            "p": self.p,
            "r": self.r,
            "modulus": self.modulus,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "pass": self.passed,
            "skipped": self.skipped,
            "note": self.note,
            "runtime_ms": round(self.runtime_ms, 3) if timings and self.runtime_ms is not None else None,
        }


def skipped(theorem_id: str, n: int, m: int, p: int, r: int, why: str) -> CongruenceReport:
    return CongruenceReport(theorem_id, n, m, p, r, skipped=True, note=why)


@dataclass
class SuiteReport:
    reports: list[CongruenceReport]
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.reports = sorted(self.reports, key=lambda rep: rep.sort_key)

    @property
    def totals(self) -> dict:
        n_skip = sum(r.skipped for r in self.reports)
        n_pass = sum(r.passed for r in self.reports)
        return {"pass": n_pass, "fail": len(self.reports) - n_pass - n_skip, "skipped": n_skip}

    @property
    def ok(self) -> bool:
        return self.totals["fail"] == 0

    def to_json(self, timings: bool = False) -> str:
        doc = {
            "config": self.config,
            "totals": self.totals,
            "reports": [r.to_dict(timings) for r in self.reports],
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"

    def to_csv(self, timings: bool = False) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=REPORT_KEYS, lineterminator="\n")
        w.writeheader()
        for r in self.reports:
            row = r.to_dict(timings)
            w.writerow({k: ("" if v is None else v) for k, v in row.items()})
        return buf.getvalue()

