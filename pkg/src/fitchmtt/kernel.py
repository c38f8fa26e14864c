"""Bidirectional checker for the five judgment forms.

Context formation, type formation at a level, type equality, typing and term
equality. Equality is delegated to :mod:`fitchmtt.conversion`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from . import conversion
from .conversion import DEFAULT_FUEL, Fuel, whnf
from .syntax import (
    BOOL,
    FALSE,
    TRUE,
    UNIT,
    App,
    BFalse,
    Bind,
    BoolT,
    Box,
    BTrue,
    Code,
    Context,
    El,
    Expr,
    If,
    Lam,
    Lock,
    Open,
    Pi,
    Shut,
    Univ,
    UnitT,
    UStar,
    Var,
    free_vars,
    fresh,
    split_at_last_lock,
    subst,
)

ERROR_CODES = (
    "UNBOUND",
    "LOCKED_VAR",
    "NO_LOCK",
    "MISMATCH",
    "NOT_A_FUNCTION",
    "NOT_A_BOX",
    "LEVEL",
    "UNIVERSE",
)


class TypeCheckError(Exception):
    def __init__(
        self,
        code: str,
        expr: Optional[Expr],
        gamma: Context,
        message: str,
        lock_index: Optional[int] = None,
    ):
        assert code in ERROR_CODES, code
        super().__init__(f"{code}: {message}")
        self.code = code
        self.expr = expr
        self.gamma = gamma
        self.message = message
        # For LOCKED_VAR: position in gamma of the lock that blocked the lookup.
        self.lock_index = lock_index


def lookup_var(gamma: Context, name: str) -> Expr:
    """Variable rule: scan right to left, refusing to cross a lock."""
    for i in range(len(gamma) - 1, -1, -1):
        entry = gamma[i]
        if isinstance(entry, Lock):
            if name in Context(gamma.entries[:i]).names():
                raise TypeCheckError(
                    "LOCKED_VAR",
                    Var(name),
                    gamma,
                    f"variable {name!r} is bound behind a lock",
                    lock_index=i,
                )
            break
        if entry.name == name:
            return entry.type
    raise TypeCheckError("UNBOUND", Var(name), gamma, f"unbound variable {name!r}")


# ---------------------------------------------------------------------------
# judgments


@dataclass(frozen=True)
class CtxOk:
    gamma: Context


@dataclass(frozen=True)
class TypeAt:
    gamma: Context
    type: Expr
    level: int


@dataclass(frozen=True)
class TypeEq:
    gamma: Context
    left: Expr
    right: Expr


@dataclass(frozen=True)
class HasType:
    gamma: Context
    term: Expr
    type: Expr


@dataclass(frozen=True)
class TermEq:
    gamma: Context
    left: Expr
    right: Expr
    type: Expr


Judgment = Union[CtxOk, TypeAt, TypeEq, HasType, TermEq]


class Kernel:
    """Checker with a fuel budget per conversion problem.

    If ``trace`` is a list, every derived typing judgment is appended to it as
    a :class:`HasType` (terms) or :class:`TypeAt` (types).
    """

    def __init__(self, fuel: int = DEFAULT_FUEL, trace: Optional[list] = None):
        self.fuel = fuel
        self.trace = trace

    def _fuel(self) -> Fuel:
        return Fuel(self.fuel)

    def whnf(self, e: Expr) -> Expr:
        return whnf(e, self._fuel())

    def conv_type(self, gamma: Context, a: Expr, b: Expr) -> bool:
        return conversion.conv_type(gamma, a, b, self._fuel())

    def conv_term(self, gamma: Context, ty: Expr, t: Expr, u: Expr) -> bool:
        return conversion.conv_term(gamma, ty, t, u, self._fuel())

    # context formation

    def check_ctx(self, gamma: Context) -> None:
        seen: set[str] = set()
        for i, entry in enumerate(gamma):
            if isinstance(entry, Bind):
                if entry.name in seen:
                    raise TypeCheckError(
                        "UNBOUND", Var(entry.name), gamma, f"{entry.name!r} is bound twice"
                    )
                self.check_type(gamma[:i], entry.type)
                seen.add(entry.name)

    # type formation

    def check_type(self, gamma: Context, a: Expr) -> int:
        """Least level n with ``gamma |-_n a``."""
        n = self._check_type(gamma, a)
        if self.trace is not None:
            self.trace.append(TypeAt(gamma, a, n))
        return n

    def _check_type(self, gamma: Context, a: Expr) -> int:
        match a:
            case BoolT() | UnitT():
                return 0
            case Univ(n):
                return n + 1
            case Pi(x, dom, cod):
                m = self.check_type(gamma, dom)
                z, (cod,) = freshen_binder(gamma, x, cod)
                return max(m, self.check_type(gamma.bind(z, dom), cod))
            case Box(inner):
                return self.check_type(gamma.lock(), inner)
            case El(u):
                ty = self.whnf(self.infer(gamma, u))
                if isinstance(ty, Univ):
                    return ty.level
                raise TypeCheckError(
                    "MISMATCH", u, gamma, f"El expects a universe element, got a term of type {ty}"
                )
        raise TypeCheckError("UNIVERSE", a, gamma, f"{a} is not a type")

    # typing

    def infer(self, gamma: Context, t: Expr) -> Expr:
        ty = self._infer(gamma, t)
        if self.trace is not None:
            self.trace.append(HasType(gamma, t, ty))
        return ty

    def _infer(self, gamma: Context, t: Expr) -> Expr:
        match t:
            case Var(name):
                return lookup_var(gamma, name)
            case App(fn, arg):
                fty = self.whnf(self.infer(gamma, fn))
                if not isinstance(fty, Pi):
                    raise TypeCheckError(
                        "NOT_A_FUNCTION", fn, gamma, f"{fn} has type {fty}, not a function type"
                    )
                self.check(gamma, arg, fty.dom)
                return subst(fty.cod, arg, fty.name)
            case Lam(x, body, ann) if ann is not None:
                self.check_type(gamma, ann)
                z, (body,) = freshen_binder(gamma, x, body)
                return Pi(z, ann, self.infer(gamma.bind(z, ann), body))
            case Lam():
                raise TypeCheckError(
                    "MISMATCH", t, gamma, "cannot infer the type of an unannotated lambda"
                )
            case Shut(body):
                return Box(self.infer(gamma.lock(), body))
            case Open(body):
                split = split_at_last_lock(gamma)
                if split is None:
                    raise TypeCheckError("NO_LOCK", t, gamma, "open used with no lock in scope")
                prefix, _ = split
                bty = self.whnf(self.infer(prefix, body))
                if not isinstance(bty, Box):
                    raise TypeCheckError(
                        "NOT_A_BOX", body, gamma, f"{body} has type {bty}, not a box type"
                    )
                return bty.body
            case Code(a):
                return Univ(self.check_type(gamma, a))
            case BTrue() | BFalse():
                return BOOL
            case UStar():
                return UNIT
            case If(z, motive, scrut, then, else_):
                self.check(gamma, scrut, BOOL)
                w, (motive,) = freshen_binder(gamma, z, motive)
                self.check_type(gamma.bind(w, BOOL), motive)
                self.check(gamma, then, subst(motive, TRUE, w))
                self.check(gamma, else_, subst(motive, FALSE, w))
                return subst(motive, scrut, w)
        raise TypeCheckError("UNIVERSE", t, gamma, f"{t} is a type, not a term (use code)")

    def check(self, gamma: Context, t: Expr, a: Expr) -> None:
        self._check(gamma, t, a)
        if self.trace is not None:
            self.trace.append(HasType(gamma, t, a))

    def _check(self, gamma: Context, t: Expr, a: Expr) -> None:
        match t:
            case Lam(x, body, ann):
                aw = self.whnf(a)
                if not isinstance(aw, Pi):
                    raise TypeCheckError("MISMATCH", t, gamma, f"a function cannot have type {aw}")
                if ann is not None and not self.conv_type(gamma, ann, aw.dom):
                    raise TypeCheckError(
                        "MISMATCH", t, gamma, f"annotation {ann} does not match domain {aw.dom}"
                    )
                z = lam_binder(gamma, x, body, aw)
                self.check(
                    gamma.bind(z, aw.dom),
                    subst(body, Var(z), x),
                    subst(aw.cod, Var(z), aw.name),
                )
                return
            case Shut(body):
                aw = self.whnf(a)
                if not isinstance(aw, Box):
                    raise TypeCheckError("MISMATCH", t, gamma, f"shut cannot have type {aw}")
                self.check(gamma.lock(), body, aw.body)
                return
        got = self.infer(gamma, t)
        if not self.conv_type(gamma, got, a):
            gw, aw = self.whnf(got), self.whnf(a)
            if isinstance(gw, Univ) and isinstance(aw, Univ):
                raise TypeCheckError(
                    "LEVEL", t, gamma, f"{t} lives in U {gw.level}, expected U {aw.level}"
                )
            got_nf = conversion.normalize(got, self._fuel())
            want_nf = conversion.normalize(a, self._fuel())
            raise TypeCheckError(
                "MISMATCH", t, gamma, f"{t} has type {got_nf}, expected {want_nf}"
            )

    # judgments

    def holds(self, j: Judgment) -> bool:
        """Decide a judgment; kernel errors count as "no"."""
        try:
            match j:
                case CtxOk(g):
                    self.check_ctx(g)
                case TypeAt(g, a, n):
                    self.check_ctx(g)
                    return self.check_type(g, a) == n
                case TypeEq(g, a, b):
                    self.check_ctx(g)
                    self.check_type(g, a)
                    self.check_type(g, b)
                    return self.conv_type(g, a, b)
                case HasType(g, t, a):
                    self.check_ctx(g)
                    self.check_type(g, a)
                    self.check(g, t, a)
                case TermEq(g, t, u, a):
                    self.check_ctx(g)
                    self.check_type(g, a)
                    self.check(g, t, a)
                    self.check(g, u, a)
                    return self.conv_term(g, a, t, u)
        except TypeCheckError:
            return False
        return True

    def check_decl(self, ann: Expr, body: Expr) -> int:
        """Check a closed declaration; returns the level of its type."""
        empty = Context()
        n = self.check_type(empty, ann)
        self.check(empty, body, ann)
        return n


def lam_binder(gamma: Context, x: str, body: Expr, pi: Pi) -> str:
    """Name for the bound variable when checking ``\\x. body`` against ``pi``."""
    clash = (free_vars(body) - {x}) | (free_vars(pi.cod) - {pi.name})
    if x != "_" and x not in gamma.names() and x not in clash:
        return x
    return fresh(x, gamma.names() | clash | {x})


def freshen_binder(gamma: Context, x: str, *bodies: Expr):
    """Rename binder ``x`` so that it does not clash with ``gamma``."""
    names = gamma.names()
    if x != "_" and x not in names:
        return x, bodies
    avoid = set(names)
    for b in bodies:
        avoid |= free_vars(b)
    z = fresh(x, avoid)
    return z, tuple(subst(b, Var(z), x) for b in bodies)


_default = Kernel()


def check_ctx(gamma: Context) -> None:
    _default.check_ctx(gamma)


def check_type(gamma: Context, a: Expr) -> int:
    return _default.check_type(gamma, a)


def infer(gamma: Context, t: Expr) -> Expr:
    return _default.infer(gamma, t)


def check(gamma: Context, t: Expr, a: Expr) -> None:
    _default.check(gamma, t, a)
