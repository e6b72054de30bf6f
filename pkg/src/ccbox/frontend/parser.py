"""Lexer and recursive-descent parser for ``.ccbox`` programs.

Names are resolved during parsing, so the result is locally nameless and
closed: every identifier becomes a de Bruijn index of its sort.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..syntax import (
    Abs,
    App,
    Arrow,
    Box,
    BoxVal,
    Capt,
    CaptureSet,
    Let,
    TAbs,
    TAll,
    TApp,
    TermExpr,
    TOP,
    TVarBound,
    TypeExpr,
    Unbox,
    VarBound,
)
from .diagnostics import (
    E_MNF_VIOLATION,
    E_SYNTAX,
    E_UNBOUND_IDENTIFIER,
    Diagnostic,
    ParseError,
    Severity,
    Span,
)

KEYWORDS = {"let", "in", "fun", "tfun", "box", "unbox", "Top"}

GLYPHS = {
    "⊤": "Top",
    "⋆": "*",
    "□": "box",
    "∘": "unbox",
    "◦": "unbox",
    "→": "->",
    "⇒": "=>",
    "λ": "fun",
    "Λ": "tfun",
}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym><:|->|=>|[{}()\[\],:=*])
  | (?P<glyph>[⊤⋆□∘◦→⇒λΛ])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "kw", "sym", "eof"
    text: str
    line: int
    col: int

    @property
    def end_col(self) -> int:
        return self.col + len(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            span = Span(line, col, line, col + 1)
            raise ParseError([Diagnostic(Severity.ERROR, span, E_SYNTAX, f"unexpected character {text[pos]!r}")])
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            tokens.append(Token("kw" if lexeme in KEYWORDS else "ident", lexeme, line, col))
        elif kind == "sym":
            tokens.append(Token("sym", lexeme, line, col))
        elif kind == "glyph":
            canon = GLYPHS[lexeme]
            tokens.append(Token("kw" if canon in KEYWORDS else "sym", canon, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class SourceProgram:
    text: str
    term: TermExpr
    spans: dict = field(default_factory=dict)

    def span_of(self, path: tuple) -> Span | None:
        while path not in self.spans and path:
            path = path[:-1]
        return self.spans.get(path)


_EXPR_STARTS = {"let", "fun", "tfun", "box", "(", "{"}


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.terms: list[str] = []  # term binder names, innermost last
        self.types: list[str] = []
        self.spans: dict = {}

    # -- token helpers --

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def _at(self, text: str) -> bool:
        return self.tok.kind in ("kw", "sym") and self.tok.text == text

    def _advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def _fail(self, message: str, code: str = E_SYNTAX, tok: Token | None = None):
        t = tok or self.tok
        span = Span(t.line, t.col, t.line, max(t.end_col, t.col + 1))
        raise ParseError([Diagnostic(Severity.ERROR, span, code, message)])

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            found = self.tok.text or "end of input"
            self._fail(f"expected '{text}', found '{found}'")
        return self._advance()

    def _ident(self) -> Token:
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            self._fail(f"expected an identifier, found '{found}'")
        return self._advance()

    def _term_index(self, tok: Token) -> int:
        for i, name in enumerate(reversed(self.terms)):
            if name == tok.text:
                return i
        self._fail(f"unbound identifier '{tok.text}'", E_UNBOUND_IDENTIFIER, tok)

    def _type_index(self, tok: Token) -> int:
        for i, name in enumerate(reversed(self.types)):
            if name == tok.text:
                return i
        self._fail(f"unbound type identifier '{tok.text}'", E_UNBOUND_IDENTIFIER, tok)

    def _operand(self, after: str) -> VarBound:
        if self.tok.kind == "ident":
            return VarBound(self._term_index(self._advance()))
        if self.tok.kind != "eof":
            self._fail(f"MNF violation: the operand of {after} must be a variable", E_MNF_VIOLATION)
        self._fail(f"expected a variable after {after}")

    # -- types --

    def parse_type(self) -> TypeExpr:
        if self._at("{"):
            c = self.parse_captures()
            return Capt(c, self.parse_pure())
        return self.parse_pure()

    def parse_captures(self) -> CaptureSet:
        self._expect("{")
        bounds, universal = set(), False
        if not self._at("}"):
            while True:
                if self._at("*"):
                    self._advance()
                    universal = True
                else:
                    bounds.add(self._term_index(self._ident()))
                if not self._at(","):
                    break
                self._advance()
        self._expect("}")
        return CaptureSet(frozenset(), frozenset(bounds), universal)

    def parse_pure(self) -> TypeExpr:
        if self._at("Top"):
            self._advance()
            return TOP
        if self.tok.kind == "ident":
            return TVarBound(self._type_index(self._advance()))
        if self._at("box"):
            self._advance()
            return Box(self.parse_type())
        if self._at("("):
            self._advance()
            name = self._ident().text
            self._expect(":")
            param = self.parse_type()
            self._expect(")")
            self._expect("->")
            self.terms.append(name)
            try:
                result = self.parse_type()
            finally:
                self.terms.pop()
            return Arrow(param, result)
        if self._at("["):
            self._advance()
            name = self._ident().text
            self._expect("<:")
            bound = self.parse_type()
            self._expect("]")
            self._expect("->")
            self.types.append(name)
            try:
                result = self.parse_type()
            finally:
                self.types.pop()
            return TAll(bound, result)
        found = self.tok.text or "end of input"
        self._fail(f"expected a type, found '{found}'")

    # -- terms --

    def parse_expr(self, path: tuple = ()) -> TermExpr:
        start = self.tok
        e = self._expr(path)
        prev = self.tokens[self.pos - 1]
        self.spans[path] = Span(start.line, start.col, prev.line, prev.end_col)
        return e

    def _bind_term(self, name: str, path: tuple) -> TermExpr:
        self.terms.append(name)
        try:
            return self.parse_expr(path)
        finally:
            self.terms.pop()

    def _expr(self, path: tuple) -> TermExpr:
        if self._at("let"):
            self._advance()
            name = self._ident().text
            self._expect("=")
            bound = self.parse_expr(path + (0,))
            self._expect("in")
            return Let(bound, self._bind_term(name, path + (1,)))
        if self._at("fun"):
            self._advance()
            self._expect("(")
            name = self._ident().text
            self._expect(":")
            param = self.parse_type()
            self._expect(")")
            self._expect("=>")
            return Abs(param, self._bind_term(name, path + (0,)))
        if self._at("tfun"):
            self._advance()
            self._expect("[")
            name = self._ident().text
            self._expect("<:")
            bound = self.parse_type()
            self._expect("]")
            self._expect("=>")
            self.types.append(name)
            try:
                body = self.parse_expr(path + (0,))
            finally:
                self.types.pop()
            return TAbs(bound, body)
        if self._at("box"):
            self._advance()
            return BoxVal(self._operand("box"))
        if self._at("{"):
            c = self.parse_captures()
            self._expect("unbox")
            return Unbox(c, self._operand("unbox"))
        if self._at("("):
            self._advance()
            e = self._expr(path)
            self._expect(")")
            if self.tok.kind == "ident" or self._at("["):
                self._fail("MNF violation: only a variable can be applied", E_MNF_VIOLATION)
            return e
        if self.tok.kind == "ident":
            head = VarBound(self._term_index(self._advance()))
            if self.tok.kind == "ident":
                arg = VarBound(self._term_index(self._advance()))
                e = App(head, arg)
            elif self._at("["):
                self._advance()
                t = self.parse_type()
                self._expect("]")
                e = TApp(head, t)
            else:
                e = head
            if self.tok.kind == "ident" or (self.tok.kind in ("kw", "sym") and self.tok.text in _EXPR_STARTS):
                self._fail("MNF violation: application operands must be variables", E_MNF_VIOLATION)
            return e
        found = self.tok.text or "end of input"
        self._fail(f"expected an expression, found '{found}'")


def parse(text: str) -> SourceProgram:
    """Parse a whole program; raises :class:`ParseError` with diagnostics."""
    p = Parser(text)
    term = p.parse_expr(())
    if p.tok.kind != "eof":
        p._fail(f"unexpected '{p.tok.text}' after the end of the program")
    return SourceProgram(text, term, p.spans)


def parse_type(text: str) -> TypeExpr:
    p = Parser(text)
    t = p.parse_type()
    if p.tok.kind != "eof":
        p._fail(f"unexpected '{p.tok.text}' after the end of the type")
    return t
