from __future__ import annotations

import enum
from dataclasses import dataclass

from ..typecheck import ErrorKind


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    span: Span | None
    code: str
    message: str
    note: str | None = None

    def render(self, filename: str = "<input>") -> str:
        where = f"{filename}:{self.span}" if self.span else filename
        text = f"{where}: {self.severity.value}[{self.code}]: {self.message}"
        if self.note:
            text += f"\n  note: {self.note}"
        return text


TYPING_CODES = {
    ErrorKind.UNBOUND_VARIABLE: "E_UNBOUND_VARIABLE",
    ErrorKind.NOT_A_FUNCTION: "E_NOT_A_FUNCTION",
    ErrorKind.NOT_A_TYPE_FUNCTION: "E_NOT_A_TYPE_FUNCTION",
    ErrorKind.NOT_A_BOX: "E_NOT_A_BOX",
    ErrorKind.ARGUMENT_MISMATCH: "E_ARGUMENT_MISMATCH",
    ErrorKind.IMPURE_TYPE_ARGUMENT: "E_IMPURE_TYPE_ARGUMENT",
    ErrorKind.UNIVERSAL_INSTANTIATION: "E_UNIVERSAL_INSTANTIATION",
    ErrorKind.ESCAPING_VARIABLE: "E_ESCAPING_VARIABLE",
    ErrorKind.ILL_FORMED_ANNOTATION: "E_ILL_FORMED_ANNOTATION",
    ErrorKind.UNBOX_CAPTURE_MISMATCH: "E_UNBOX_CAPTURE_MISMATCH",
}

E_SYNTAX = "E_SYNTAX"
E_MNF_VIOLATION = "E_MNF_VIOLATION"
E_UNBOUND_IDENTIFIER = "E_UNBOUND_IDENTIFIER"


class ParseError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.message for d in diagnostics))
        self.diagnostics = diagnostics
