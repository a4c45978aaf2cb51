from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class CheckReport:
    """Outcome of one check.

    ``details`` and ``certificate`` hold JSON-ready values only; key order is
    the insertion order, which keeps rendered output byte-stable.
    """

    kind: str
    passed: bool
    summary: str
    details: Dict[str, Any] = field(default_factory=dict)
    certificate: Optional[Dict[str, Any]] = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.passed

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "kind": self.kind,
            "verdict": self.verdict,
            "summary": self.summary,
            "details": self.details,
        }
        if self.certificate is not None:
            data["certificate"] = self.certificate
        if self.note:
            data["note"] = self.note
        return data

    def render_text(self) -> str:
        lines: List[str] = [f"{self.verdict} {self.kind}: {self.summary}"]
        for key, value in self.details.items():
            lines.append(f"  {key}: {_flat(value)}")
        if self.note:
            lines.append(f"  note: {self.note}")
        if self.certificate is not None:
            lines.append("  certificate:")
            for key, value in self.certificate.items():
                lines.append(f"    {key}: {_flat(value)}")
        return "\n".join(lines)


def _flat(value: Any) -> str:
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, ensure_ascii=False)
    return str(value)


def merge_reports(kind: str, parts: List[CheckReport]) -> CheckReport:
    failed = [part for part in parts if not part.passed]
    details = {part.kind: part.verdict for part in parts}
    certificate = failed[0].to_dict() if failed else None
    summary = f"{len(parts) - len(failed)}/{len(parts)} Teilprüfungen bestanden"
    return CheckReport(kind, not failed, summary, details, certificate)


__all__ = ["CheckReport", "merge_reports"]
