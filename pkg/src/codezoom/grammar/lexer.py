"""Hand-rolled tokenizer for pseudocode text.

Tokens are the five structural delimiters plus free-text runs. A text run
ends at a delimiter or at a line break; runs are emitted with surrounding
whitespace stripped, so whitespace between tokens never matters. Header
words (``GOAL:``/``STEPS:``) and keywords (``if``/``elif``/``else``/
``while``/``for``) are ordinary text runs here; the parser gives them
meaning by position.
"""

from __future__ import annotations

from dataclasses import dataclass

SEMI = "semi"
LBRACE = "lbrace"
RBRACE = "rbrace"
LPAREN = "lparen"
RPAREN = "rparen"
TEXT = "text"
EOF = "eof"

_DELIMS = {";": SEMI, "{": LBRACE, "}": RBRACE, "(": LPAREN, ")": RPAREN}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        if self.kind == TEXT:
            return f"text {self.text!r}"
        return f"'{self.text}'"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line = 1
    col = 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in _DELIMS:
            tokens.append(Token(_DELIMS[ch], ch, line, col))
            col += 1
            i += 1
            continue
        # text run: up to the next delimiter or line break
        start = i
        start_col = col
        while i < n and source[i] not in _DELIMS and source[i] not in "\n\r":
            i += 1
            col += 1
        run = source[start:i].strip()
        if run:
            tokens.append(Token(TEXT, run, line, start_col))
    tokens.append(Token(EOF, "", line, col))
    return tokens
