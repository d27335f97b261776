"""Line-oriented check reports shared by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Check", "Report"]

PASS, FAIL, NOTE = "PASS", "FAIL", "NOTE"


@dataclass(frozen=True)
class Check:
    status: str
    label: str
    detail: str = ""

    def line(self) -> str:
        return f"{self.status} {self.label}" + (f" :: {self.detail}" if self.detail else "")


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def check(self, ok: bool, label: str, detail: str = "") -> bool:
        self.checks.append(Check(PASS if ok else FAIL, label, detail))
        return ok

    def note(self, label: str, detail: str = ""):
        self.checks.append(Check(NOTE, label, detail))

    def extend(self, other: "Report"):
        for c in other.checks:
            self.checks.append(Check(c.status, f"{other.title}/{c.label}", c.detail))

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if c.status == FAIL]

    def notes(self) -> list:
        return [c for c in self.checks if c.status == NOTE]

    def count(self, status: str) -> int:
        return sum(c.status == status for c in self.checks)

    def render(self) -> str:
        lines = [f"# {self.title}"]
        lines += [c.line() for c in self.checks]
        verdict = "PASS" if self.ok else "FAIL"
        lines.append(
            f"VERDICT {self.title} {verdict} "
            f"({self.count(PASS)} pass, {self.count(FAIL)} fail, {self.count(NOTE)} note)"
        )
        return "\n".join(lines)
