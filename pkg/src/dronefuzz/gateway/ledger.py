"""Mitigation ledger: structured failure analyses gating field readiness.

One entry records an observed failure, its root causes, and the immediate
and long-term mitigations with their verification status. A test scenario is
ready for field execution only when every mitigation is ``completed`` or
``passed``; an entry with no mitigations at all is never ready (a failure
nobody has addressed is not safe by default).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import SchemaError

CRITICALITIES = ("LOW", "MED", "HIGH")
MITIGATION_KINDS = ("Immediate", "Long-Term")
STATUSES = ("completed", "back-logged", "on-hold", "passed")
CLEARED_STATUSES = ("completed", "passed")

GATE_READY = "READY FOR FIELD-TESTING"
GATE_NOT_READY = "NOT READY FOR FIELD-TESTING"


@dataclass(frozen=True)
class RootCause:
    description: str
    criticality: str = "MED"

    def __post_init__(self) -> None:
        if self.criticality not in CRITICALITIES:
            raise SchemaError(f"bad criticality {self.criticality!r}")


@dataclass(frozen=True)
class Mitigation:
    kind: str
    description: str
    status: str
    root_cause: int = 0  # 1-based index into the entry's root causes; 0 = unlinked

    def __post_init__(self) -> None:
        if self.kind not in MITIGATION_KINDS:
            raise SchemaError(f"bad mitigation kind {self.kind!r}")
        if self.status not in STATUSES:
            raise SchemaError(f"bad mitigation status {self.status!r}")

    @property
    def cleared(self) -> bool:
        return self.status in CLEARED_STATUSES


@dataclass(frozen=True)
class LedgerEntry:
    entry_id: str
    observed_failure: str
    linked_tests: tuple[str, ...] = ()
    root_causes: tuple[RootCause, ...] = ()
    mitigations: tuple[Mitigation, ...] = ()

    @property
    def criticality(self) -> str:
        worst = 0
        for cause in self.root_causes:
            worst = max(worst, CRITICALITIES.index(cause.criticality))
        return CRITICALITIES[worst] if self.root_causes else "LOW"

    def to_document(self) -> dict:
        return {
            "Entry_ID": self.entry_id,
            "Observed_Failure": self.observed_failure,
            "Linked_Tests": list(self.linked_tests),
            "Root_Causes": [
                {"Description": c.description, "Criticality": c.criticality}
                for c in self.root_causes
            ],
            "Mitigations": [
                {
                    "Root_Cause": m.root_cause,
                    "Kind": m.kind,
                    "Description": m.description,
                    "Status": m.status,
                }
                for m in self.mitigations
            ],
        }


def parse_ledger_entry(document: str | bytes | dict) -> LedgerEntry:
    if isinstance(document, dict):
        doc = document
    else:
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"ledger entry is not valid JSON: {exc}") from exc
    known = {"Entry_ID", "Observed_Failure", "Linked_Tests", "Root_Causes", "Mitigations"}
    unknown = set(doc) - known
    if unknown:
        raise SchemaError(f"ledger entry: unknown fields {sorted(unknown)}")
    causes = []
    for cause_doc in doc.get("Root_Causes", []):
        if isinstance(cause_doc, str):
            causes.append(RootCause(description=cause_doc))
        else:
            causes.append(
                RootCause(
                    description=str(cause_doc.get("Description", "")),
                    criticality=str(cause_doc.get("Criticality", "MED")),
                )
            )
    mitigations = []
    for m_doc in doc.get("Mitigations", []):
        mitigations.append(
            Mitigation(
                kind=str(m_doc.get("Kind", "Immediate")),
                description=str(m_doc.get("Description", "")),
                status=str(m_doc.get("Status", "back-logged")),
                root_cause=int(m_doc.get("Root_Cause", 0)),
            )
        )
    if "Entry_ID" not in doc or "Observed_Failure" not in doc:
        raise SchemaError("ledger entry needs Entry_ID and Observed_Failure")
    return LedgerEntry(
        entry_id=str(doc["Entry_ID"]),
        observed_failure=str(doc["Observed_Failure"]),
        linked_tests=tuple(str(t) for t in doc.get("Linked_Tests", [])),
        root_causes=tuple(causes),
        mitigations=tuple(mitigations),
    )


@dataclass(frozen=True)
class GateResult:
    ready: bool
    diagnostics: tuple[str, ...]
    report: str

    @property
    def verdict(self) -> str:
        return GATE_READY if self.ready else GATE_NOT_READY


def ledger_gate(entry: LedgerEntry) -> GateResult:
    """Evaluate field readiness and render the human-facing summary table."""
    diagnostics = []
    if not entry.mitigations:
        diagnostics.append("no mitigations recorded")
    for i, mitigation in enumerate(entry.mitigations, start=1):
        if not mitigation.cleared:
            diagnostics.append(
                f"mitigation {i} ({mitigation.kind}) is {mitigation.status}"
            )
    ready = not diagnostics
    return GateResult(ready=ready, diagnostics=tuple(diagnostics), report=render_report(entry, ready))


def render_report(entry: LedgerEntry, ready: bool) -> str:
    width = 100
    lines = []
    lines.append("=" * width)
    lines.append(f"LEDGER ENTRY: {entry.entry_id}   (criticality {entry.criticality})")
    lines.append("-" * width)
    lines.append("Observed failure:")
    lines.extend(f"  {chunk}" for chunk in _wrap(entry.observed_failure, width - 2))
    if entry.linked_tests:
        lines.append(f"Linked tests: {', '.join(entry.linked_tests)}")
    lines.append("-" * width)
    for i, cause in enumerate(entry.root_causes, start=1):
        lines.append(f"Root cause {i} [{cause.criticality}]:")
        lines.extend(f"  {chunk}" for chunk in _wrap(cause.description, width - 2))
        for mitigation in entry.mitigations:
            if mitigation.root_cause == i:
                lines.append(f"  {mitigation.kind:<10} [{mitigation.status:^11}]")
                lines.extend(f"    {chunk}" for chunk in _wrap(mitigation.description, width - 4))
    unlinked = [m for m in entry.mitigations if m.root_cause == 0]
    if unlinked:
        lines.append("Other mitigations:")
        for mitigation in unlinked:
            lines.append(f"  {mitigation.kind:<10} [{mitigation.status:^11}]")
            lines.extend(f"    {chunk}" for chunk in _wrap(mitigation.description, width - 4))
    lines.append("-" * width)
    lines.append(f"Flight readiness: {GATE_READY if ready else GATE_NOT_READY}")
    lines.append("=" * width)
    return "\n".join(lines)


def _wrap(text: str, width: int) -> list[str]:
    words = text.split()
    out, line = [], ""
    for word in words:
        if line and len(line) + 1 + len(word) > width:
            out.append(line)
            line = word
        else:
            line = f"{line} {word}" if line else word
    if line:
        out.append(line)
    return out or [""]


# -- flat-file store ------------------------------------------------------------


class LedgerStore:
    """Directory of one JSON document per ledger entry."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def add(self, entry: LedgerEntry) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / f"{entry.entry_id}.json"
        path.write_text(json.dumps(entry.to_document(), indent=2) + "\n", encoding="utf-8")
        return path

    def load(self, entry_id: str) -> LedgerEntry:
        path = self.root / f"{entry_id}.json"
        if not path.exists():
            raise FileNotFoundError(f"no ledger entry {entry_id!r} in {self.root}")
        return parse_ledger_entry(path.read_text(encoding="utf-8"))

    def entries(self) -> list[LedgerEntry]:
        if not self.root.exists():
            return []
        return [
            parse_ledger_entry(path.read_text(encoding="utf-8"))
            for path in sorted(self.root.glob("*.json"))
        ]

    def export_cleared(self) -> dict:
        """Entries whose gate is Ready, with their linked tests: the set of
        scenarios cleared for field execution."""
        cleared = {}
        for entry in self.entries():
            if ledger_gate(entry).ready:
                cleared[entry.entry_id] = list(entry.linked_tests)
        return cleared
