"""Verdict objects shared by the checking modules and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    ok: bool
    name: str
    details: dict = field(default_factory=dict)
    counterexample: dict | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        out = {"check": self.name, "ok": self.ok, "details": self.details}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out
