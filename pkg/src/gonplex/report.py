"""Pass/fail reports with a witness per failed check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    ok: bool
    witness: Any = None
    detail: str = ""

    def __str__(self):
        status = "pass" if self.ok else "FAIL"
        text = f"{self.name}: {status}"
        if self.detail:
            text += f" ({self.detail})"
        if not self.ok and self.witness is not None:
            text += f" witness={self.witness}"
        return text


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool, witness: Any = None, detail: str = "") -> Check:
        check = Check(name, bool(ok), witness, detail)
        self.checks.append(check)
        return check

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __bool__(self):
        return self.ok

    def __str__(self):
        head = f"{self.title}: {'pass' if self.ok else 'FAIL'}"
        return "\n".join([head] + [f"  {c}" for c in self.checks])
