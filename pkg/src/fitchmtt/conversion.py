"""Definitional equality.

Computation rules (head reductions)::

    (\\x. t) u           ->  t[u/x]
    open (shut t)        ->  t
    El (code A)          ->  A
    code (El u)          ->  u
    if z.C then t else e on true/false  ->  t / e

Eta for functions and boxes is handled during comparison, driven by the type,
never by expanding normal forms.
"""

from __future__ import annotations

from typing import Optional

from .syntax import (
    App,
    BFalse,
    BoolT,
    Box,
    BTrue,
    Code,
    Context,
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
    alpha_eq,
    free_vars,
    fresh,
    split_at_last_lock,
    subst,
    BOOL,
    FALSE,
    TRUE,
)

DEFAULT_FUEL = 10_000


class FuelExhausted(Exception):
    """Reduction budget ran out. Never to be read as "not equal"."""


class Fuel:
    """Mutable step budget shared by one conversion problem."""

    def __init__(self, steps: int = DEFAULT_FUEL):
        if steps < 0:
            raise ValueError("fuel must be non-negative")
        self.remaining = steps
        self.used = 0

    def spend(self):
        if self.remaining <= 0:
            raise FuelExhausted(f"reduction budget exhausted after {self.used} steps")
        self.remaining -= 1
        self.used += 1

    def __repr__(self):
        return f"Fuel(remaining={self.remaining})"


def _fuel(fuel) -> Fuel:
    if fuel is None:
        return Fuel()
    if isinstance(fuel, int):
        return Fuel(fuel)
    return fuel


# Reduction steps fired, as (kind, before, after). None disables recording.
_trace: Optional[list] = None


def record_reductions(log: Optional[list]):
    """Install ``log`` to collect every head reduction; returns the previous log."""
    global _trace
    prev, _trace = _trace, log
    return prev


def _step(fuel: Fuel, kind: str, before: Expr, after: Expr) -> Expr:
    fuel.spend()
    if _trace is not None:
        _trace.append((kind, before, after))
    return after


def whnf(e: Expr, fuel: Fuel | int | None = None) -> Expr:
    """Weak-head normal form."""
    fuel = _fuel(fuel)
    while True:
        match e:
            case App(fn, arg):
                f = whnf(fn, fuel)
                if isinstance(f, Lam):
                    e = _step(fuel, "beta", App(f, arg), subst(f.body, arg, f.name))
                    continue
                return e if f is fn else App(f, arg)
            case Open(body):
                b = whnf(body, fuel)
                if isinstance(b, Shut):
                    e = _step(fuel, "open-shut", Open(b), b.body)
                    continue
                return e if b is body else Open(b)
            case El(code):
                c = whnf(code, fuel)
                if isinstance(c, Code):
                    e = _step(fuel, "El-code", El(c), c.ty)
                    continue
                return e if c is code else El(c)
            case Code(ty):
                t = whnf(ty, fuel)
                if isinstance(t, El):
                    e = _step(fuel, "code-El", Code(t), t.code)
                    continue
                return e if t is ty else Code(t)
            case If(z, motive, scrut, then, else_):
                s = whnf(scrut, fuel)
                if isinstance(s, BTrue):
                    e = _step(fuel, "if-true", If(z, motive, s, then, else_), then)
                    continue
                if isinstance(s, BFalse):
                    e = _step(fuel, "if-false", If(z, motive, s, then, else_), else_)
                    continue
                return e if s is scrut else If(z, motive, s, then, else_)
        return e


def normalize(e: Expr, fuel: Fuel | int | None = None) -> Expr:
    """Full normal form: whnf at every position."""
    fuel = _fuel(fuel)
    e = whnf(e, fuel)
    match e:
        case Lam(x, body, ann):
            return Lam(x, normalize(body, fuel), None if ann is None else normalize(ann, fuel))
        case App(fn, arg):
            return App(normalize(fn, fuel), normalize(arg, fuel))
        case Pi(x, dom, cod):
            return Pi(x, normalize(dom, fuel), normalize(cod, fuel))
        case If(z, motive, scrut, then, else_):
            return If(
                z,
                normalize(motive, fuel),
                normalize(scrut, fuel),
                normalize(then, fuel),
                normalize(else_, fuel),
            )
        case Shut(b):
            return Shut(normalize(b, fuel))
        case Open(b):
            return Open(normalize(b, fuel))
        case Box(b):
            return Box(normalize(b, fuel))
        case El(b):
            return El(normalize(b, fuel))
        case Code(b):
            return Code(normalize(b, fuel))
    return e


# ---------------------------------------------------------------------------
# comparison


def _avoid(gamma: Context, *es: Expr) -> set[str]:
    names = gamma.names()
    for e in es:
        names |= free_vars(e)
    return names


def conv_type(gamma: Context, a: Expr, b: Expr, fuel: Fuel | int | None = None) -> bool:
    """Decide ``gamma |- a = b`` for types."""
    fuel = _fuel(fuel)
    if a == b:
        return True
    a, b = whnf(a, fuel), whnf(b, fuel)
    match a, b:
        case Pi(x, d1, c1), Pi(y, d2, c2):
            if not conv_type(gamma, d1, d2, fuel):
                return False
            z = fresh(x, _avoid(gamma, c1, c2) | {y})
            return conv_type(
                gamma.bind(z, d1), subst(c1, Var(z), x), subst(c2, Var(z), y), fuel
            )
        case Box(a1), Box(b1):
            return conv_type(gamma.lock(), a1, b1, fuel)
        case El(u), El(v):
            return _conv_code(gamma, u, v, fuel)
        case Univ(m), Univ(n):
            return m == n
        case (BoolT(), BoolT()) | (UnitT(), UnitT()):
            return True
    return False


def conv_term(
    gamma: Context, ty: Expr, t: Expr, u: Expr, fuel: Fuel | int | None = None
) -> bool:
    """Decide ``gamma |- t = u : ty``."""
    fuel = _fuel(fuel)
    if t == u:
        return True
    ty = whnf(ty, fuel)
    match ty:
        case Pi(x, dom, cod):
            z = fresh(x, _avoid(gamma, t, u, cod))
            return conv_term(
                gamma.bind(z, dom),
                subst(cod, Var(z), x),
                App(t, Var(z)),
                App(u, Var(z)),
                fuel,
            )
        case Box(inner):
            return conv_term(gamma.lock(), inner, Open(t), Open(u), fuel)
        case Univ():
            return _conv_code(gamma, t, u, fuel)
    t, u = whnf(t, fuel), whnf(u, fuel)
    match t, u:
        case (BTrue(), BTrue()) | (BFalse(), BFalse()) | (UStar(), UStar()):
            return True
    return _neutral(gamma, t, u, fuel) is not None


def _conv_code(gamma: Context, t: Expr, u: Expr, fuel: Fuel) -> bool:
    # Elements of a universe: codes compare as types, everything else is neutral.
    if t == u:
        return True
    t, u = whnf(t, fuel), whnf(u, fuel)
    match t, u:
        case Code(a), Code(b):
            return conv_type(gamma, a, b, fuel)
        case Code(), _:
            return False
        case _, Code():
            return False
    return _neutral(gamma, t, u, fuel) is not None


_UNKNOWN = object()


def _neutral(gamma: Context, t: Expr, u: Expr, fuel: Fuel):
    """Compare two whnf neutrals; returns the common type, or None if unequal.

    ``open x`` is a neutral head: it only reduces when x is a ``shut``.
    """
    match t, u:
        case Var(x), Var(y):
            if x != y:
                return None
            found = gamma.lookup(x)
            return _UNKNOWN if found is None else found
        case App(f1, a1), App(f2, a2):
            fty = _neutral(gamma, f1, f2, fuel)
            if fty is None:
                return None
            if fty is _UNKNOWN:
                ok = alpha_eq(normalize(a1, fuel), normalize(a2, fuel))
                return _UNKNOWN if ok else None
            fty = whnf(fty, fuel)
            if not isinstance(fty, Pi):
                return None
            if not conv_term(gamma, fty.dom, a1, a2, fuel):
                return None
            return subst(fty.cod, a1, fty.name)
        case Open(b1), Open(b2):
            split = split_at_last_lock(gamma)
            if split is None:
                return None
            bty = _neutral(split[0], b1, b2, fuel)
            if bty is None or bty is _UNKNOWN:
                return bty
            bty = whnf(bty, fuel)
            return bty.body if isinstance(bty, Box) else None
        case If(z1, m1, s1, t1, e1), If(z2, m2, s2, t2, e2):
            if _neutral(gamma, s1, s2, fuel) is None:
                return None
            z = fresh(z1, _avoid(gamma, m1, m2))
            motive = subst(m1, Var(z), z1)
            if not conv_type(gamma.bind(z, BOOL), motive, subst(m2, Var(z), z2), fuel):
                return None
            if not conv_term(gamma, subst(motive, TRUE, z), t1, t2, fuel):
                return None
            if not conv_term(gamma, subst(motive, FALSE, z), e1, e2, fuel):
                return None
            return subst(motive, s1, z)
    return None
