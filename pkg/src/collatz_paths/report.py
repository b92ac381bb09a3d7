"""Claim verdicts and their deterministic serialization."""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from typing import Any


class Verdict(str, enum.Enum):
    HOLDS = "Holds"
    REFUTED = "Refuted"
    UNDETERMINED = "Undetermined"


@dataclass
class ClaimResult:
    claim_id: str
    domain_description: str
    instances_tested: int
    verdict: Verdict
    counterexamples: list[dict] = field(default_factory=list)
    # violations found before the per-claim cap was applied
    counterexamples_found: int = 0
    details: dict = field(default_factory=dict)

    def to_document(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "domain_description": self.domain_description,
            "instances_tested": self.instances_tested,
            "verdict": self.verdict.value,
            "counterexamples": self.counterexamples,
            "counterexamples_found": self.counterexamples_found,
            "details": self.details,
        }


@dataclass
class AuditReport:
    results: list[ClaimResult]
    configuration: dict
    timestamp: str = ""

    @property
    def refuted(self) -> bool:
        return any(r.verdict is Verdict.REFUTED for r in self.results)

    def to_document(self, include_timestamp: bool = True) -> dict:
        doc = {
            "configuration": self.configuration,
            "results": [r.to_document() for r in self.results],
        }
        if include_timestamp:
            doc["timestamp"] = self.timestamp
        return encode(doc)


def encode(obj: Any) -> Any:
    """Recursively turn ints into decimal strings; bools and None pass through."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    return obj


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_text(report: AuditReport) -> str:
    lines = []
    for r in report.results:
        lines.append(
            f"{r.claim_id:<26} {r.verdict.value:<13} instances={r.instances_tested} "
            f"counterexamples={r.counterexamples_found}"
        )
        lines.append(f"    domain: {r.domain_description}")
        for cx in r.counterexamples[:10]:
            lines.append("    - " + ", ".join(f"{k}={v}" for k, v in sorted(cx.items())))
        if len(r.counterexamples) > 10:
            lines.append(f"    ... {len(r.counterexamples) - 10} more")
        for key in sorted(r.details):
            val = r.details[key]
            if isinstance(val, (list, dict)):
                continue
            lines.append(f"    {key}: {val}")
    return "\n".join(lines) + "\n"


GROWTH_COLUMNS = ["total_moves", "n", "k", "r_list", "min_follower"]


def growth_table_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=GROWTH_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({c: row[c] for c in GROWTH_COLUMNS})
    return buf.getvalue()


def summary_csv(report: AuditReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["claim_id", "verdict", "instances_tested", "counterexamples_found", "domain_description"])
    for r in report.results:
        w.writerow([r.claim_id, r.verdict.value, r.instances_tested, r.counterexamples_found, r.domain_description])
    return buf.getvalue()
