"""Concrete ``.mtt`` syntax: parsing into core syntax and pretty-printing back.

Grammar (whitespace-insensitive, ``--`` line comments)::

    file  ::= { "def" IDENT ":" expr ":=" expr ";" }
    expr  ::= "fun" "(" IDENT ":" expr ")" "->" expr
            | "\\" IDENT "." expr | "\\" "(" IDENT ":" expr ")" "." expr
            | "shut" expr | "open" expr
            | "if" IDENT "." expr "then" expr "else" expr "on" atom
            | app [ "->" expr ]
    app   ::= ("Box" | "El" | "code") atom | atom { atom }
    atom  ::= IDENT | "Bool" | "true" | "false" | "Unit" | "star" | "U" NAT | "(" expr ")"

``_`` may appear only as a binder. The annotated lambda is an extension used
for elaborated output; hand-written sources rarely need it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .syntax import (
    App,
    BFalse,
    BoolT,
    Box,
    BTrue,
    Code,
    El,
    Expr,
    If,
    Lam,
    Open,
    Pi,
    Shut,
    Univ,
    UnitT,
    UStar,
    Var,
    free_vars,
    fresh,
    subst,
)

KEYWORDS = frozenset(
    "def fun shut open Box El code if then else on Bool true false Unit star U".split()
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>:=|->|[\\.():;])
""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    column: int
    length: int
    message: str
    code: str = "PARSE"

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity} {self.code}: {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


@dataclass(frozen=True)
class Decl:
    name: str
    annotation: Expr
    body: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SourceFile:
    decls: tuple[Decl, ...]

    def __getitem__(self, name: str) -> Decl:
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(name)

    def names(self) -> list[str]:
        return [d.name for d in self.decls]


@dataclass(frozen=True)
class _Tok:
    kind: str  # "ident", "kw", "nat", "sym", "eof"
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(
                Diagnostic("error", line, pos - line_start + 1, 1, f"unexpected character {text[pos]!r}")
            )
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            if kind == "ident" and s in KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _lex(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(
            Diagnostic("error", tok.line, tok.col, max(len(tok.text), 1), f"{msg}, found {found}")
        )

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "kw") and self.tok.text == text

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self, binder: bool = False) -> str:
        t = self.tok
        if t.kind != "ident" or (t.text == "_" and not binder):
            self.error("expected identifier")
        self.i += 1
        return t.text

    # file

    def file(self) -> SourceFile:
        decls: list[Decl] = []
        seen: set[str] = set()
        while self.tok.kind != "eof":
            start = self.expect("def")
            name_tok = self.tok
            name = self.ident()
            if name in seen:
                self.error(f"duplicate definition {name!r}", name_tok)
            self.expect(":")
            ann = self.expr()
            self.expect(":=")
            body = self.expr()
            self.expect(";")
            seen.add(name)
            decls.append(Decl(name, ann, body, start.line))
        return SourceFile(tuple(decls))

    # expressions

    def expr(self) -> Expr:
        if self.at("fun"):
            self.i += 1
            self.expect("(")
            x = self.ident(binder=True)
            self.expect(":")
            dom = self.expr()
            self.expect(")")
            self.expect("->")
            return Pi(x, dom, self.expr())
        if self.at("\\"):
            self.i += 1
            ann = None
            if self.at("("):
                self.i += 1
                x = self.ident(binder=True)
                self.expect(":")
                ann = self.expr()
                self.expect(")")
            else:
                x = self.ident(binder=True)
            self.expect(".")
            return Lam(x, self.expr(), ann)
        if self.at("shut"):
            self.i += 1
            return Shut(self.expr())
        if self.at("open"):
            self.i += 1
            return Open(self.expr())
        if self.at("if"):
            self.i += 1
            z = self.ident(binder=True)
            self.expect(".")
            motive = self.expr()
            self.expect("then")
            then = self.expr()
            self.expect("else")
            else_ = self.expr()
            self.expect("on")
            return If(z, motive, self.atom(), then, else_)
        lhs = self.app()
        if self.at("->"):
            self.i += 1
            cod = self.expr()
            return Pi("_", lhs, cod)
        return lhs

    def app(self) -> Expr:
        for kw, ctor in (("Box", Box), ("El", El), ("code", Code)):
            if self.at(kw):
                self.i += 1
                return ctor(self.atom())
        e = self.atom()
        while self._atom_start():
            e = App(e, self.atom())
        return e

    def _atom_start(self) -> bool:
        t = self.tok
        if t.kind == "ident":
            return t.text != "_"
        return t.kind in ("kw", "sym") and t.text in ("Bool", "true", "false", "Unit", "star", "U", "(")

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "ident" and t.text != "_":
            self.i += 1
            return Var(t.text)
        if t.kind == "kw":
            simple = {"Bool": BoolT, "true": BTrue, "false": BFalse, "Unit": UnitT, "star": UStar}
            if t.text in simple:
                self.i += 1
                return simple[t.text]()
            if t.text == "U":
                self.i += 1
                n = self.tok
                if n.kind != "nat":
                    self.error("expected universe level")
                self.i += 1
                return Univ(int(n.text))
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        self.error("expected expression")


def parse(text: str) -> SourceFile:
    """Parse a whole ``.mtt`` file. Raises ParseError on the first problem."""
    p = _Parser(text)
    try:
        return p.file()
    except RecursionError:
        t = p.tok
        raise ParseError(Diagnostic("error", t.line, t.col, 1, "expression nested too deeply")) from None


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    try:
        e = p.expr()
    except RecursionError:
        t = p.tok
        raise ParseError(Diagnostic("error", t.line, t.col, 1, "expression nested too deeply")) from None
    if p.tok.kind != "eof":
        p.error("expected end of input")
    return e


# ---------------------------------------------------------------------------
# printing

# Precedence of the position an expression is printed into.
_ANY, _ARROW_DOM, _HEAD, _ATOM = 0, 1, 2, 3


def _level(e: Expr) -> int:
    match e:
        case Lam() | Shut() | Open() | If() | Pi():
            return _ANY
        case Box() | El() | Code():
            return _ARROW_DOM
        case App():
            return _HEAD
    return _ATOM


def pretty(e: Expr) -> str:
    """Render ``e`` with as few parentheses as the grammar allows."""
    return _pp(e, _ANY)


def _pp(e: Expr, prec: int) -> str:
    s = _pp_bare(e)
    return f"({s})" if _level(e) < prec else s


def _pp_bare(e: Expr) -> str:
    match e:
        case Var(name):
            return name
        case BoolT():
            return "Bool"
        case BTrue():
            return "true"
        case BFalse():
            return "false"
        case UnitT():
            return "Unit"
        case UStar():
            return "star"
        case Univ(n):
            return f"U {n}"
        case Lam(x, body, None):
            return f"\\{x}. {_pp(body, _ANY)}"
        case Lam(x, body, ann):
            return f"\\({x} : {_pp(ann, _ANY)}). {_pp(body, _ANY)}"
        case App(fn, arg):
            return f"{_pp(fn, _HEAD)} {_pp(arg, _ATOM)}"
        case Shut(b):
            return f"shut {_pp(b, _ANY)}"
        case Open(b):
            return f"open {_pp(b, _ANY)}"
        case Box(b):
            return f"Box {_pp(b, _ATOM)}"
        case El(b):
            return f"El {_pp(b, _ATOM)}"
        case Code(b):
            return f"code {_pp(b, _ATOM)}"
        case Pi(x, dom, cod) if x == "_" or x not in free_vars(cod):
            return f"{_pp(dom, _ARROW_DOM)} -> {_pp(cod, _ANY)}"
        case Pi(x, dom, cod):
            return f"fun ({x} : {_pp(dom, _ANY)}) -> {_pp(cod, _ANY)}"
        case If(z, motive, scrut, then, else_):
            return (
                f"if {z}. {_pp(motive, _ANY)} then {_pp(then, _ANY)} "
                f"else {_pp(else_, _ANY)} on {_pp(scrut, _ATOM)}"
            )
    raise AssertionError(f"unhandled node {e!r}")


def pretty_decl(d: Decl) -> str:
    return f"def {d.name} : {pretty(d.annotation)} := {pretty(d.body)};"


# ---------------------------------------------------------------------------
# elaboration


def annotate(body: Expr, ty: Expr) -> Expr:
    """Push binder annotations from ``ty`` onto the lambda spine of ``body``.

    Makes a checkable body inferable, so it can be inlined anywhere.
    """
    match body, ty:
        case Lam(x, b, ann), Pi(y, dom, cod):
            if x != y and x in free_vars(cod):
                x2 = fresh(x, free_vars(cod) | free_vars(b))
                b, x = subst(b, Var(x2), x), x2
            return Lam(x, annotate(b, subst(cod, Var(x), y)), dom if ann is None else ann)
        case Shut(b), Box(inner):
            return Shut(annotate(b, inner))
    return body


def elaborate(src: SourceFile) -> list[Decl]:
    """Inline earlier definitions into later ones; returns closed declarations."""
    done: list[Decl] = []
    env: dict[str, Expr] = {}
    for d in src.decls:
        ann, body = d.annotation, d.body
        for name, value in reversed(list(env.items())):
            ann = subst(ann, value, name)
            body = subst(body, value, name)
        done.append(Decl(d.name, ann, body, d.line))
        env[d.name] = annotate(body, ann)
    return done
