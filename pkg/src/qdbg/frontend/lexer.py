"""Tokenizer for QDL source text.

Comments run from `#` to end of line. Whitespace is insignificant outside
tokens. Identifiers are [A-Za-z_][A-Za-z0-9_]*; gate names, measurement
forms and keywords are all lexed as IDENT and told apart by the parser.
"""
from __future__ import annotations

from dataclasses import dataclass


class LexError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    type: str  # IDENT | NUMBER | SYM | EOF
    value: str | int | float
    line: int
    col: int
    end_line: int
    end_col: int


_TWO_CHAR = ("<=", ">=", "==", "!=", "..")
_ONE_CHAR = "{}();,@=<>+-*/"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c in " \t\r\n":
            advance()
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                advance()
            continue
        start_line, start_col = line, col
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            advance(j - i)
            tokens.append(Token("IDENT", word, start_line, start_col, line, col))
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            is_float = False
            # A '.' only starts a fraction when a digit follows; "0..2" stays INT INT.
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            word = text[i:j]
            advance(j - i)
            value: int | float = float(word) if is_float else int(word)
            tokens.append(Token("NUMBER", value, start_line, start_col, line, col))
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR:
            advance(2)
            tokens.append(Token("SYM", two, start_line, start_col, line, col))
            continue
        if c in _ONE_CHAR:
            advance()
            tokens.append(Token("SYM", c, start_line, start_col, line, col))
            continue
        raise LexError(f"unexpected character '{c}'", line, col)

    tokens.append(Token("EOF", "", line, col, line, col))
    return tokens
