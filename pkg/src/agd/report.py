"""Check reports: named checks carrying exact residuals.

A check passes iff every residual it evaluated is zero; only nonzero
residuals are stored. Mathematical failure never raises.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Iterator

__all__ = [
    "VerificationError",
    "PreconditionError",
    "Status",
    "Residual",
    "Check",
    "Report",
    "residual_check",
    "skipped",
]


class VerificationError(ValueError):
    """A construction was refused; ``report`` holds the failing residuals."""

    def __init__(self, message: str, report: "Report | None" = None):
        super().__init__(message if report is None else f"{message}\n{report}")
        self.report = report


class PreconditionError(VerificationError):
    """An operation was called before the checks it depends on passed."""


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class Residual:
    at: str
    value: Any

    def __str__(self) -> str:
        return f"{self.at}: {self.value}"


@dataclass
class Check:
    name: str
    status: Status
    residuals: list[Residual] = field(default_factory=list)
    evaluated: int = 0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    @property
    def failed(self) -> bool:
        return self.status is Status.FAIL

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "status": self.status.value,
            "evaluated": self.evaluated,
            "residuals": [{"at": r.at, "value": str(r.value)} for r in self.residuals],
            "note": self.note,
        }


def residual_check(name: str, items: Iterable[tuple[str, Any]], note: str = "") -> Check:
    """Evaluate ``(label, value)`` pairs; fail on any value that is not zero."""
    residuals = []
    n = 0
    for at, value in items:
        n += 1
        if not value.is_zero:
            residuals.append(Residual(at, value))
    return Check(name, Status.FAIL if residuals else Status.PASS, residuals, n, note)


def skipped(name: str, note: str) -> Check:
    return Check(name, Status.SKIPPED, note=note)


@dataclass
class Report:
    subject: str
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(
                Check(prefix + c.name, c.status, c.residuals, c.evaluated, c.note)
            )

    @property
    def passed(self) -> bool:
        """No check failed (skipped checks do not count as failures)."""
        return not any(c.failed for c in self.checks)

    @property
    def status(self) -> Status:
        return Status.PASS if self.passed else Status.FAIL

    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if c.failed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "status": self.status.value,
            "checks": [c.to_dict() for c in self.checks],
        }

    def format(self, max_residuals: int = 5) -> str:
        lines = [f"{self.subject}: {self.status.value.upper()}"]
        for c in self.checks:
            extra = f" [{c.note}]" if c.note else ""
            lines.append(f"  {c.status.value:7s} {c.name} ({c.evaluated} evaluated){extra}")
            for r in c.residuals[:max_residuals]:
                lines.append(f"      residual at {r.at}: {r.value}")
            if len(c.residuals) > max_residuals:
                lines.append(f"      ... {len(c.residuals) - max_residuals} more")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.format()
