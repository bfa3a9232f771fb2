from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"
INFO = "info"

# codes
MANUAL_SYNC = "ManualSynchronizationRequired"
MIXED_USAGE = "MixedUsage"
UNDECLARED_CANDIDATE = "UndeclaredCandidate"
INDEX_ASSIGNED = "LoopIndexAssigned"
EXTRA_LOOPS = "AdditionalLoopsIgnored"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    line: int | None = None
    variable: str | None = None

    def format(self, path: str | None = None) -> str:
        loc = path or ""
        if self.line is not None:
            loc = f"{loc}:{self.line}" if loc else f"line {self.line}"
        prefix = f"{loc}: " if loc else ""
        return f"{prefix}{self.severity}: {self.code}: {self.message}"

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "line": self.line,
            "variable": self.variable,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Diagnostic":
        return cls(data["severity"], data["code"], data["message"], data.get("line"), data.get("variable"))


def manual_sync_variables(diagnostics) -> set[str]:
    return {d.variable for d in diagnostics if d.code == MANUAL_SYNC and d.variable}
