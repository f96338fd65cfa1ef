from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import Diagnostic, Span

IDENT = "ident"
KEYWORD = "keyword"
SYMBOL = "symbol"
EOF = "eof"

KEYWORDS = frozenset(
    {"def", "eq", "assume", "propext", "via", "fun", "dfun", "match", "as", "if", "then", "else"}
)

# longest first, so ":=" wins over ":" and "->" over "-"
SYMBOLS = (":=", "=>", "->", ".1", ".2", ":", "=", "(", ")", "{", "}", ";", ",", "*", "+")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_SPACE = re.compile(r"[ \t\r\n]+")


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    span: Span

    def __repr__(self):
        return f"{self.kind} {self.lexeme!r}" if self.kind != EOF else "eof"


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, end = 0, len(source)
    while pos < end:
        if m := _SPACE.match(source, pos):
            pos = m.end()
            continue
        if source.startswith("--", pos):
            newline = source.find("\n", pos)
            pos = end if newline < 0 else newline + 1
            continue
        if m := _IDENT.match(source, pos):
            word = m.group()
            tokens.append(Token(KEYWORD if word in KEYWORDS else IDENT, word, Span(pos, m.end())))
            pos = m.end()
            continue
        for sym in SYMBOLS:
            if source.startswith(sym, pos):
                tokens.append(Token(SYMBOL, sym, Span(pos, pos + len(sym))))
                pos += len(sym)
                break
        else:
            ch = source[pos]
            hint = " (the surface syntax is ASCII: write pair(u, v), u.1, u.2)" if ord(ch) > 127 else ""
            raise Diagnostic(f"unexpected character {ch!r}{hint}", Span(pos, pos + 1), code="lex")
    tokens.append(Token(EOF, "", Span(end, end)))
    return tokens
