"""Plain result records shared by the core modules and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List


@dataclass
class Classification:
    """Structural flags of one semilattice."""
    size: int
    distributive: bool
    boolean: bool
    atomistic: bool
    lattice_simple: bool
    join_irreducibles: List[int] = field(default_factory=list)
    meet_irreducibles: List[int] = field(default_factory=list)
    distributivity_witness: Any = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class Violation:
    """One failed law, with the case it failed on."""
    law: str
    subject: str
    witness: Any = None

    def to_dict(self) -> Dict[str, Any]:
        return {"law": self.law, "subject": self.subject, "witness": _plain(self.witness)}


@dataclass
class LawReport:
    """Outcome of checking a family of laws.

    A report passes when nothing was violated and nothing was skipped; a
    skipped case is one a size cap kept from being checked.
    """
    name: str
    cases: int = 0
    violations: List[Violation] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations and self.complete

    @property
    def complete(self) -> bool:
        return not self.skipped

    def check(self, law: str, ok: bool, subject: str, witness: Any = None) -> bool:
        self.cases += 1
        if not ok:
            self.violations.append(Violation(law, subject, witness))
        return ok

    def skip(self, subject: str, reason: str) -> None:
        self.skipped.append(f"{subject}: {reason}")

    def merge(self, other: "LawReport") -> None:
        self.cases += other.cases
        self.violations.extend(other.violations)
        self.skipped.extend(other.skipped)
        for key, value in other.notes.items():
            mine = self.notes.get(key)
            if isinstance(mine, dict) and isinstance(value, dict):
                mine.update(value)
            elif isinstance(mine, list) and isinstance(value, list):
                mine.extend(value)
            else:
                self.notes.setdefault(key, value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "cases": self.cases,
            "passed": self.passed,
            "complete": self.complete,
            "violations": [v.to_dict() for v in self.violations],
            "skipped": list(self.skipped),
            "notes": _plain(self.notes),
        }


@dataclass
class SuiteReport(LawReport):
    wall_time_ms: int = 0

    def to_dict(self) -> Dict[str, Any]:
        out = super().to_dict()
        out["wall_time_ms"] = self.wall_time_ms
        return out


def _plain(value: Any) -> Any:
    """Convert tuples and sets into JSON-friendly lists, recursively."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_plain(v) for v in value)
    return value
