"""Recursive-descent parser for the formula text grammar.

Precedence, tightest first: ``~``, ``&``, ``|``, ``->`` (right-assoc),
``<->``.  ``exists p q. body`` / ``forall p. body`` bind as far right as
possible.  ``->`` and ``<->`` are expanded into the core connectives.
"""
from __future__ import annotations

import re

from .errors import ParseError
from .formula import BOT, TOP, Atom, Exists, Formula, And, Not, Or, forall, iff, implies

_TOKEN = re.compile(r"\s*(?:(<->|->|[~&|().])|([A-Za-z_][A-Za-z0-9_']*))")


def tokenize(text: str) -> list[tuple[str, int]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = text[pos:].lstrip()
            raise ParseError(f"unexpected character {bad[:1]!r}", text, len(text) - len(bad))
        out.append((m.group(1) or m.group(2), m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, expected=None):
        if self.i >= len(self.toks):
            raise ParseError("unexpected end of input" + (f", expected {expected!r}" if expected else ""),
                             self.text, len(self.text))
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", self.text, pos)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        if self.i != len(self.toks):
            tok, pos = self.toks[self.i]
            raise ParseError(f"unexpected token {tok!r}", self.text, pos)
        return f

    def iff(self):
        f = self.imp()
        while self.peek() == "<->":
            self.take()
            f = iff(f, self.imp())
        return f

    def imp(self):
        f = self.disj()
        if self.peek() == "->":
            self.take()
            return implies(f, self.imp())
        return f

    def disj(self):
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.peek() == "~":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if tok in ("exists", "forall"):
            self.take()
            names = []
            while self.peek() not in (".", None):
                names.append(self.ident())
            if not names:
                raise ParseError(f"{tok} needs at least one variable", self.text, self._pos())
            self.take(".")
            body = self.iff()
            for n in reversed(names):
                body = Exists(n, body) if tok == "exists" else forall(n, body)
            return body
        if tok == "true":
            self.take()
            return TOP
        if tok == "false":
            self.take()
            return BOT
        return Atom(self.ident())

    def ident(self):
        pos = self._pos()
        if self.peek() is None:
            raise ParseError("unexpected end of input, expected identifier", self.text, pos)
        tok = self.take()
        if tok in ("true", "false", "exists", "forall") or not re.match(r"[A-Za-z_]", tok):
            raise ParseError(f"expected identifier, found {tok!r}", self.text, pos)
        return tok

    def _pos(self):
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)


def parse(text: str) -> Formula:
    """Parse ``text`` into a formula; raises :class:`ParseError` on bad input."""
    if not text.strip():
        raise ParseError("empty formula", text, 0)
    return _Parser(text).parse()


def parse_atoms(text: str) -> frozenset[str]:
    """Comma/space separated atom list, e.g. ``"c,e"``."""
    names = [n for n in re.split(r"[,\s]+", text.strip()) if n]
    for n in names:
        Atom(n)
    return frozenset(names)
