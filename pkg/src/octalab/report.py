"""Pass/fail records shared by the verification suites."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Callable

from .geometry import VerificationError
from .graphs import GraphError


@dataclass
class Check:
    tag: str
    passed: bool
    detail: str = ""
    witness: Any = None

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.tag:<36} {self.detail}"


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, tag: str, passed: bool, detail: str = "", witness: Any = None) -> Check:
        c = Check(tag, bool(passed), detail, witness)
        self.checks.append(c)
        return c

    def expect(self, tag: str, got: Any, want: Any) -> Check:
        return self.add(tag, got == want, f"got {got}, expected {want}")

    def attempt(self, tag: str, fn: Callable[[], Any], describe: Callable[[Any], str] = str) -> Any:
        """Run ``fn``; a verification error becomes a failed check with its witness."""
        try:
            value = fn()
        except (VerificationError, GraphError) as exc:
            self.add(tag, False, str(exc), exc.witness)
            return None
        self.add(tag, True, describe(value))
        return value

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"title": self.title, "passed": self.passed,
                "checks": [asdict(c) for c in self.checks], "data": self.data}

    def to_text(self) -> str:
        return "\n".join([f"== {self.title}"] + [c.line() for c in self.checks]) + "\n"
