from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Span:
    """Half-open ``[start, end)`` range of character offsets into the source."""

    start: int
    end: int

    def cover(self, other: Span) -> Span:
        return Span(min(self.start, other.start), max(self.end, other.end))


def line_col(source: str, offset: int) -> tuple[int, int]:
    line = source.count("\n", 0, offset) + 1
    col = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, col


class Diagnostic(Exception):
    def __init__(
        self,
        message: str,
        span: Optional[Span] = None,
        *,
        severity: str = "error",
        code: str = "syntax",
        expected: Optional[str] = None,
        actual: Optional[str] = None,
    ):
        super().__init__(message)
        self.message = message
        self.span = span
        self.severity = severity
        self.code = code
        self.expected = expected
        self.actual = actual

    def one_line(self, source: str = "", path: str = "<input>") -> str:
        where = path
        if self.span is not None:
            line, col = line_col(source, self.span.start)
            where = f"{path}:{line}:{col}"
        text = f"{where}: {self.severity}[{self.code}]: {self.message}"
        if self.expected is not None:
            text += f"; expected {self.expected}"
        if self.actual is not None:
            text += f", got {self.actual}"
        return text

    def render(self, source: str, path: str = "<input>") -> str:
        """Multi-line display with the offending source line and carets."""
        lines = [self.one_line(source, path)]
        if self.span is not None and source:
            line, col = line_col(source, self.span.start)
            src_lines = source.splitlines()
            text = src_lines[line - 1] if line - 1 < len(src_lines) else ""
            width = max(1, min(self.span.end, self.span.start + len(text) - col + 1) - self.span.start)
            lines.append(f"  {line:>4} | {text}")
            lines.append(f"       | {' ' * (col - 1)}{'^' * width}")
        return "\n".join(lines)
