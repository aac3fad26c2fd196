"""Tokenizer shared by all six document kinds.

Tokens carry 1-based line/column positions so every downstream error can point
into the source. ``//`` starts a line comment.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, SourceLocation

IDENT = "identifier"
NUMBER = "number"
STRING = "string"
PUNCT = "punct"
EOF = "end of input"

_PUNCTUATION = ("->", "{", "}", ";", ":", ",", ".")


@dataclass(frozen=True)
class Token:
    type: str
    value: str
    line: int
    column: int

    def location(self, file: str) -> SourceLocation:
        return SourceLocation(file, self.line, self.column)


def tokenize(text: str, file: str = "<string>") -> list[Token]:
    tokens: list[Token] = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch == '"':
            value, consumed = _scan_string(text, i, file, start_line, start_col)
            tokens.append(Token(STRING, value, start_line, start_col))
            col += consumed
            i += consumed
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and (text[j].isdigit() or text[j] in ".eE+-"):
                # '+'/'-' only valid directly after an exponent marker
                if text[j] in "+-" and text[j - 1] not in "eE":
                    break
                j += 1
            literal = text[i:j]
            try:
                float(literal)
            except ValueError:
                raise ParseError(
                    SourceLocation(file, start_line, start_col),
                    f"malformed number literal '{literal}'",
                )
            tokens.append(Token(NUMBER, literal, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token(IDENT, text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        matched = False
        for punct in _PUNCTUATION:
            if text.startswith(punct, i):
                tokens.append(Token(PUNCT, punct, start_line, start_col))
                col += len(punct)
                i += len(punct)
                matched = True
                break
        if matched:
            continue
        raise ParseError(
            SourceLocation(file, start_line, start_col),
            f"unexpected character {ch!r}",
        )
    tokens.append(Token(EOF, "", line, col))
    return tokens


def _scan_string(
    text: str, start: int, file: str, line: int, col: int
) -> tuple[str, int]:
    out: list[str] = []
    i = start + 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == '"':
            return "".join(out), i - start + 1
        if ch == "\n":
            break
        if ch == "\\" and i + 1 < n and text[i + 1] in ('"', "\\"):
            out.append(text[i + 1])
            i += 2
            continue
        out.append(ch)
        i += 1
    raise ParseError(SourceLocation(file, line, col), "unterminated string literal")
