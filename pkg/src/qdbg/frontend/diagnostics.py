from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    phase: str  # "syntax" | "semantic"
    line: int
    col: int
    message: str

    def to_json_dict(self) -> dict:
        return {
            "severity": self.severity,
            "phase": self.phase,
            "line": self.line,
            "col": self.col,
            "message": self.message,
        }

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.phase} {self.severity}: {self.message}"


def syntax_error(line: int, col: int, message: str) -> Diagnostic:
    return Diagnostic("error", "syntax", line, col, message)


def semantic_error(line: int, col: int, message: str) -> Diagnostic:
    return Diagnostic("error", "semantic", line, col, message)
