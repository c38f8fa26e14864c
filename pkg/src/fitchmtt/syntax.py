"""Raw syntax of contexts, types and terms.

Types and terms share one tree; the kernel tells them apart by judgment.
Variables are named. Binders are renamed on demand during substitution, and
alpha-equivalence is decided explicitly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union


class Expr:
    """Base class of every syntax node."""

    __slots__ = ()

    def __str__(self) -> str:
        from .surface import pretty

        return pretty(self)


@dataclass(frozen=True, repr=False)
class Var(Expr):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Lam(Expr):
    name: str
    body: Expr
    # Optional domain annotation; the surface language usually omits it.
    ann: Optional[Expr] = None

    def __repr__(self):
        if self.ann is None:
            return f"Lam({self.name!r}, {self.body!r})"
        return f"Lam({self.name!r}, {self.body!r}, ann={self.ann!r})"


@dataclass(frozen=True, repr=False)
class App(Expr):
    fn: Expr
    arg: Expr

    def __repr__(self):
        return f"App({self.fn!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Shut(Expr):
    body: Expr

    def __repr__(self):
        return f"Shut({self.body!r})"


@dataclass(frozen=True, repr=False)
class Open(Expr):
    body: Expr

    def __repr__(self):
        return f"Open({self.body!r})"


@dataclass(frozen=True, repr=False)
class Pi(Expr):
    name: str
    dom: Expr
    cod: Expr

    def __repr__(self):
        return f"Pi({self.name!r}, {self.dom!r}, {self.cod!r})"


@dataclass(frozen=True, repr=False)
class Box(Expr):
    body: Expr

    def __repr__(self):
        return f"Box({self.body!r})"


@dataclass(frozen=True, repr=False)
class Univ(Expr):
    level: int

    def __post_init__(self):
        if not isinstance(self.level, int) or self.level < 0:
            raise ValueError(f"universe level must be a natural number, got {self.level!r}")

    def __repr__(self):
        return f"Univ({self.level})"


@dataclass(frozen=True, repr=False)
class El(Expr):
    code: Expr

    def __repr__(self):
        return f"El({self.code!r})"


@dataclass(frozen=True, repr=False)
class Code(Expr):
    ty: Expr

    def __repr__(self):
        return f"Code({self.ty!r})"


@dataclass(frozen=True, repr=False)
class BoolT(Expr):
    def __repr__(self):
        return "Bool"


@dataclass(frozen=True, repr=False)
class BTrue(Expr):
    def __repr__(self):
        return "BTrue"


@dataclass(frozen=True, repr=False)
class BFalse(Expr):
    def __repr__(self):
        return "BFalse"


@dataclass(frozen=True, repr=False)
class If(Expr):
    """Dependent Bool eliminator ``if z. motive then t else e on scrut``."""

    name: str
    motive: Expr
    scrut: Expr
    then: Expr
    else_: Expr

    def __repr__(self):
        return (
            f"If({self.name!r}, {self.motive!r}, {self.scrut!r}, "
            f"{self.then!r}, {self.else_!r})"
        )


@dataclass(frozen=True, repr=False)
class UnitT(Expr):
    def __repr__(self):
        return "Unit"


@dataclass(frozen=True, repr=False)
class UStar(Expr):
    def __repr__(self):
        return "UStar"


# Shared constants; the classes compare structurally so fresh instances work too.
BOOL = BoolT()
TRUE = BTrue()
FALSE = BFalse()
UNIT = UnitT()
STAR = UStar()


def arrow(dom: Expr, cod: Expr) -> Pi:
    """Non-dependent function type."""
    return Pi("_", dom, cod)


# ---------------------------------------------------------------------------
# contexts


@dataclass(frozen=True)
class Bind:
    name: str
    type: Expr

    def __str__(self):
        return f"{self.name} : {self.type}"


@dataclass(frozen=True)
class Lock:
    def __str__(self):
        return "🔒"


LOCK = Lock()

CtxEntry = Union[Bind, Lock]


@dataclass(frozen=True)
class Context:
    """Ordered telescope, leftmost entry outermost."""

    entries: tuple = ()

    def __iter__(self) -> Iterator[CtxEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Context(self.entries[i])
        return self.entries[i]

    def __add__(self, other) -> "Context":
        if isinstance(other, Context):
            return Context(self.entries + other.entries)
        return Context(self.entries + tuple(other))

    def bind(self, name: str, ty: Expr) -> "Context":
        return Context(self.entries + (Bind(name, ty),))

    def lock(self) -> "Context":
        return Context(self.entries + (LOCK,))

    def names(self) -> set[str]:
        return {e.name for e in self.entries if isinstance(e, Bind)}

    def lookup(self, name: str) -> Optional[Expr]:
        """Type of ``name``, ignoring locks. Used by conversion only."""
        for e in reversed(self.entries):
            if isinstance(e, Bind) and e.name == name:
                return e.type
        return None

    def has_lock(self) -> bool:
        return any(isinstance(e, Lock) for e in self.entries)

    def __str__(self):
        if not self.entries:
            return "◇"
        return ", ".join(str(e) for e in self.entries)


def ctx(*entries: CtxEntry) -> Context:
    return Context(tuple(entries))


def split_at_last_lock(gamma: Context) -> Optional[tuple[Context, tuple[Bind, ...]]]:
    """Split at the rightmost lock into (prefix, lock-free suffix), or None."""
    for i in range(len(gamma.entries) - 1, -1, -1):
        if isinstance(gamma.entries[i], Lock):
            return Context(gamma.entries[:i]), tuple(gamma.entries[i + 1 :])
    return None


# ---------------------------------------------------------------------------
# free variables, freshening, substitution


@lru_cache(maxsize=None)
def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Var(name):
            return frozenset((name,))
        case Lam(name, body, ann):
            fv = free_vars(body) - {name}
            return fv | free_vars(ann) if ann is not None else fv
        case Pi(name, dom, cod):
            return free_vars(dom) | (free_vars(cod) - {name})
        case If(name, motive, scrut, then, else_):
            return (
                (free_vars(motive) - {name})
                | free_vars(scrut)
                | free_vars(then)
                | free_vars(else_)
            )
        case App(fn, arg):
            return free_vars(fn) | free_vars(arg)
        case Shut(b) | Open(b) | Box(b) | El(b) | Code(b):
            return free_vars(b)
        case _:
            return frozenset()


_TRAILING_DIGITS = re.compile(r"\d+$")


def fresh(base: str, avoid: Iterable[str]) -> str:
    """A name derived from ``base`` that is not in ``avoid``."""
    avoid = set(avoid)
    if base == "_":
        base = "x"
    if base not in avoid:
        return base
    stem = _TRAILING_DIGITS.sub("", base) or "x"
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def rename(e: Expr, old: str, new: str) -> Expr:
    return subst(e, Var(new), old)


def subst(e: Expr, u: Expr, x: str) -> Expr:
    """Capture-avoiding ``e[u/x]``. Locks play no role here."""
    if x not in free_vars(e):
        return e
    return _subst(e, u, x, free_vars(u))


def _binder(name: str, body_fv: frozenset, u_fv: frozenset, x: str, *bodies: Expr):
    """Rename ``name`` away from ``u_fv`` if substituting under it would capture."""
    if name in u_fv and x in body_fv:
        new = fresh(name, u_fv | body_fv | {x})
        return new, tuple(rename(b, name, new) for b in bodies)
    return name, bodies


def _subst(e: Expr, u: Expr, x: str, ufv: frozenset) -> Expr:
    if x not in free_vars(e):
        return e
    match e:
        case Var(name):
            return u if name == x else e
        case App(fn, arg):
            return App(_subst(fn, u, x, ufv), _subst(arg, u, x, ufv))
        case Lam(name, body, ann):
            ann2 = _subst(ann, u, x, ufv) if ann is not None else None
            if name == x:
                return Lam(name, body, ann2)
            name, (body,) = _binder(name, free_vars(body), ufv, x, body)
            return Lam(name, _subst(body, u, x, ufv), ann2)
        case Pi(name, dom, cod):
            dom2 = _subst(dom, u, x, ufv)
            if name == x:
                return Pi(name, dom2, cod)
            name, (cod,) = _binder(name, free_vars(cod), ufv, x, cod)
            return Pi(name, dom2, _subst(cod, u, x, ufv))
        case If(name, motive, scrut, then, else_):
            scrut2 = _subst(scrut, u, x, ufv)
            then2 = _subst(then, u, x, ufv)
            else2 = _subst(else_, u, x, ufv)
            if name != x:
                name, (motive,) = _binder(name, free_vars(motive), ufv, x, motive)
                motive = _subst(motive, u, x, ufv)
            return If(name, motive, scrut2, then2, else2)
        case Shut(b):
            return Shut(_subst(b, u, x, ufv))
        case Open(b):
            return Open(_subst(b, u, x, ufv))
        case Box(b):
            return Box(_subst(b, u, x, ufv))
        case El(b):
            return El(_subst(b, u, x, ufv))
        case Code(b):
            return Code(_subst(b, u, x, ufv))
    raise AssertionError(f"unhandled node {e!r}")


def subst_ctx(entries: Iterable[CtxEntry], u: Expr, x: str) -> tuple[CtxEntry, ...]:
    """Apply ``[u/x]`` to the bind types of a context fragment, up to a rebinding of x."""
    out = []
    live = True
    for entry in entries:
        if live and isinstance(entry, Bind):
            out.append(Bind(entry.name, subst(entry.type, u, x)))
            live = entry.name != x
        else:
            out.append(entry)
    return tuple(out)


# ---------------------------------------------------------------------------
# alpha-equivalence


def alpha_eq(e1: Expr, e2: Expr) -> bool:
    return _alpha(e1, e2, {}, {}, 0)


def _alpha(a: Expr, b: Expr, ma: dict, mb: dict, depth: int) -> bool:
    match a, b:
        case Var(x), Var(y):
            lx, ly = ma.get(x), mb.get(y)
            if lx is None and ly is None:
                return x == y
            return lx == ly
        case App(f1, a1), App(f2, a2):
            return _alpha(f1, f2, ma, mb, depth) and _alpha(a1, a2, ma, mb, depth)
        case Lam(x, b1, t1), Lam(y, b2, t2):
            if (t1 is None) != (t2 is None):
                return False
            if t1 is not None and not _alpha(t1, t2, ma, mb, depth):
                return False
            return _alpha(b1, b2, {**ma, x: depth}, {**mb, y: depth}, depth + 1)
        case Pi(x, d1, c1), Pi(y, d2, c2):
            return _alpha(d1, d2, ma, mb, depth) and _alpha(
                c1, c2, {**ma, x: depth}, {**mb, y: depth}, depth + 1
            )
        case If(x, m1, s1, t1, e1), If(y, m2, s2, t2, e2):
            return (
                _alpha(m1, m2, {**ma, x: depth}, {**mb, y: depth}, depth + 1)
                and _alpha(s1, s2, ma, mb, depth)
                and _alpha(t1, t2, ma, mb, depth)
                and _alpha(e1, e2, ma, mb, depth)
            )
        case (Shut(x), Shut(y)) | (Open(x), Open(y)) | (Box(x), Box(y)) | (
            El(x),
            El(y),
        ) | (Code(x), Code(y)):
            return _alpha(x, y, ma, mb, depth)
        case Univ(m), Univ(n):
            return m == n
    return type(a) is type(b) and type(a) in _NULLARY


_NULLARY = (BoolT, BTrue, BFalse, UnitT, UStar)


def size(e: Expr) -> int:
    """Number of nodes."""
    match e:
        case Lam(_, body, ann):
            return 1 + size(body) + (size(ann) if ann is not None else 0)
        case App(f, a):
            return 1 + size(f) + size(a)
        case Pi(_, d, c):
            return 1 + size(d) + size(c)
        case If(_, m, s, t, f):
            return 1 + size(m) + size(s) + size(t) + size(f)
        case Shut(b) | Open(b) | Box(b) | El(b) | Code(b):
            return 1 + size(b)
    return 1


def mentions_universe(e: Expr) -> bool:
    match e:
        case Univ() | El() | Code():
            return True
        case Lam(_, body, ann):
            return mentions_universe(body) or (ann is not None and mentions_universe(ann))
        case App(f, a):
            return mentions_universe(f) or mentions_universe(a)
        case Pi(_, d, c):
            return mentions_universe(d) or mentions_universe(c)
        case If(_, m, s, t, f):
            return any(mentions_universe(x) for x in (m, s, t, f))
        case Shut(b) | Open(b) | Box(b):
            return mentions_universe(b)
    return False
