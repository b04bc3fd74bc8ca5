"""Parsers for constraint files and first-order formulas.

Constraint files hold one statement per line; ``#`` starts a comment::

    symbols(a, b, c)
    closer(a,b ; c,d)      # od(a,b) << od(c,d)
    leq(a,b ; c,d)         # od(a,b) <= od(c,d)
    before(a, b)           # a < b

Formulas use ``much_closer(W,X,Y,Z)``, ``X = Y``, ``!``, ``&``, ``|``,
``exists X . body``, ``forall X . body`` and parentheses.  ``!`` binds
tighter than ``&``, which binds tighter than ``|``; a quantifier's body runs
as far right as possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .constraints import ConstraintSet, before, closer, leq
from .fo_decide import And, Eq, Exists, Forall, MuchCloser, Not, Or

IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_TOKEN = re.compile(rf"\s*(?:(?P<ident>{IDENT})|(?P<punct>[(),;=!&|.]))")
KEYWORDS = {"exists", "forall", "much_closer"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", a punctuation character, or "end"
    text: str
    col: int


def tokenize(text: str, line: int = 1) -> list:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            out.append(Token("end", "", pos + 1))
            return out
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        col = m.start(m.lastgroup) + 1
        if m.group("ident"):
            out.append(Token("ident", m.group("ident"), col))
        else:
            out.append(Token(m.group("punct"), m.group("punct"), col))
        pos = m.end()


class _Cursor:
    def __init__(self, tokens, line):
        self.tokens = tokens
        self.i = 0
        self.line = line

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        t = self.peek
        if t.kind != kind:
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ParseError(f"expected {what or repr(kind)}, found {found}", self.line, t.col)
        return self.take()

    def ident(self) -> str:
        return self.expect("ident", "a symbol").text


# -- constraint documents -----------------------------------------------------------

@dataclass(frozen=True)
class Statement:
    """One parsed line: a constraint, or a ``symbols(...)`` declaration."""

    value: object  # a constraint, or a tuple of declared symbols
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def is_declaration(self) -> bool:
        return isinstance(self.value, tuple) and not hasattr(self.value, "_fields")

    def __str__(self) -> str:
        if self.is_declaration:
            return f"symbols({', '.join(self.value)})"
        return str(self.value)


@dataclass
class ConstraintDocument:
    statements: list = field(default_factory=list)
    warnings: list = field(default_factory=list, compare=False)

    @property
    def symbols(self) -> tuple:
        return self.constraint_set().symbols

    def constraint_set(self) -> ConstraintSet:
        declared = set()
        cons = []
        for st in self.statements:
            if st.is_declaration:
                declared.update(st.value)
            else:
                cons.append(st.value)
        return ConstraintSet.of(*cons, symbols=declared)

    def __str__(self) -> str:
        return "".join(f"{st}\n" for st in self.statements)


def _pair(cur: _Cursor) -> tuple:
    a = cur.ident()
    cur.expect(",", "','")
    b = cur.ident()
    return a, b


def parse_statement(text: str, line: int = 1) -> Optional[Statement]:
    """Parse one line; ``None`` for blank or comment-only lines."""
    text = text.split("#", 1)[0]
    tokens = tokenize(text, line)
    cur = _Cursor(tokens, line)
    if cur.peek.kind == "end":
        return None
    head = cur.expect("ident", "a statement")
    cur.expect("(", "'('")
    if head.text in ("closer", "leq"):
        a, b = _pair(cur)
        cur.expect(";", "';'")
        c, d = _pair(cur)
        value = (closer if head.text == "closer" else leq)(a, b, c, d)
    elif head.text == "before":
        value = before(*_pair(cur))
    elif head.text == "symbols":
        names = [cur.ident()]
        while cur.peek.kind == ",":
            cur.take()
            names.append(cur.ident())
        value = tuple(names)
    else:
        raise ParseError(f"unknown statement {head.text!r}", line, head.col)
    cur.expect(")", "')'")
    cur.expect("end", "end of statement")
    return Statement(value, line, head.col)


def parse_constraints(text: str) -> ConstraintDocument:
    doc = ConstraintDocument()
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        st = parse_statement(raw, lineno)
        if st is None:
            continue
        # named tuples compare field-wise, so the type must be part of the key
        key = (type(st.value), st.value)
        if key in seen:
            doc.warnings.append(f"line {lineno}: duplicate of line {seen[key]} ignored: {st}")
            continue
        seen[key] = lineno
        doc.statements.append(st)
    return doc


def parse_constraint(text: str):
    """A single constraint, as given to ``--query``."""
    st = parse_statement(text)
    if st is None or st.is_declaration:
        raise ParseError("expected closer(...), leq(...) or before(...)")
    return st.value


def format_constraints(cs: ConstraintSet) -> str:
    lines = [str(c) for c in cs]
    if cs.declared:
        lines.insert(0, f"symbols({', '.join(sorted(cs.declared))})")
    return "".join(f"{l}\n" for l in lines)


# -- formulas --------------------------------------------------------------------

def parse_formula(text: str):
    cur = _Cursor(tokenize(text), 1)
    f = _or(cur)
    cur.expect("end", "end of formula")
    return f


def _var(cur: _Cursor) -> str:
    t = cur.expect("ident", "a variable")
    if t.text in KEYWORDS:
        raise ParseError(f"{t.text!r} is reserved", cur.line, t.col)
    return t.text


def _or(cur):
    f = _and(cur)
    while cur.peek.kind == "|":
        cur.take()
        f = Or(f, _and(cur))
    return f


def _and(cur):
    f = _unary(cur)
    while cur.peek.kind == "&":
        cur.take()
        f = And(f, _unary(cur))
    return f


def _unary(cur):
    t = cur.peek
    if t.kind == "!":
        cur.take()
        return Not(_unary(cur))
    if t.kind == "(":
        cur.take()
        f = _or(cur)
        cur.expect(")", "')'")
        return f
    if t.kind == "ident" and t.text in ("exists", "forall"):
        cur.take()
        var = _var(cur)
        cur.expect(".", "'.'")
        body = _or(cur)
        return Exists(var, body) if t.text == "exists" else Forall(var, body)
    if t.kind == "ident" and t.text == "much_closer":
        cur.take()
        cur.expect("(", "'('")
        args = [_var(cur)]
        while cur.peek.kind == ",":
            cur.take()
            args.append(_var(cur))
        if len(args) != 4:
            raise ParseError(f"much_closer takes 4 arguments, got {len(args)}", cur.line, t.col)
        cur.expect(")", "')'")
        return MuchCloser(*args)
    if t.kind == "ident":
        x = _var(cur)
        cur.expect("=", "'='")
        return Eq(x, _var(cur))
    found = "end of input" if t.kind == "end" else repr(t.text)
    raise ParseError(f"expected a formula, found {found}", cur.line, t.col)
