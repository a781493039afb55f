"""Pass/fail records produced by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class VerificationError(AssertionError):
    def __init__(self, message: str, verification: "Verification | None" = None):
        super().__init__(message)
        self.verification = verification


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Verification:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def add(self, name: str, passed: bool, **detail) -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def extend(self, other: "Verification", prefix: str | None = None) -> "Verification":
        pre = f"{prefix or other.name}/"
        for c in other.checks:
            self.checks.append(Check(pre + c.name, c.passed, c.detail))
        return self

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def require(self) -> "Verification":
        if not self.ok:
            first = self.failures()[0]
            raise VerificationError(f"{self.name}: check {first.name} failed {first.detail}", self)
        return self

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "checks": [c.to_dict() for c in self.checks]}

    def summary(self) -> str:
        bad = self.failures()
        if not bad:
            return f"{self.name}: {len(self.checks)} checks passed"
        return f"{self.name}: {len(bad)}/{len(self.checks)} checks failed, first: {bad[0].name}"
