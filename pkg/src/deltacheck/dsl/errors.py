"""Source locations and parse/load failures for the textual model languages."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class SourceLocation:
    file: str
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1:
            raise ValueError("line and column are 1-based")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseError(Exception):
    """First syntax or construction-level error in document order."""

    location: SourceLocation
    message: str
    expected: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.message:
            raise ValueError("parse error message must not be empty")

    def __str__(self) -> str:
        if self.expected:
            return f"{self.location}: {self.message} (expected {', '.join(self.expected)})"
        return f"{self.location}: {self.message}"


class LoadError(Exception):
    """A manifest-referenced file failed to load; distinct from ParseError."""
