"""Interpretation of checked syntax in the presheaf model, and the soundness oracle.

Contexts go to presheaves, types to Giraud families, terms to elements.  A
lock is ``L``, a box is the right adjoint acting on families, ``shut`` and ``open`` are
the two transposes.  Universe syntax raises :class:`OutOfFragment`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import model
from .conversion import DEFAULT_FUEL, Fuel, FuelExhausted, normalize, whnf
from .kernel import HasType, Kernel, TypeCheckError, freshen_binder, lam_binder
from .model import (
    GiraudFamily,
    ModelError,
    Morphism,
    OutOfFragment,
    Presheaf,
    bool_family,
    compose,
    constant_element,
    identity,
    pi_family,
    pi_lam,
    pi_app,
    terminal,
    unit_family,
)
from .surface import Decl, SourceFile, annotate, elaborate, pretty
from .syntax import (
    BOOL,
    FALSE,
    TRUE,
    App,
    Bind,
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
    Lock,
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
    mentions_universe,
    split_at_last_lock,
    subst,
    subst_ctx,
)


class Interpretation:
    """Memoised interpretation at a fixed depth."""

    def __init__(self, depth: int = 3, fuel: int = DEFAULT_FUEL):
        if depth < 1:
            raise ValueError("depth must be at least 1")
        self.depth = depth
        self.kernel = Kernel(fuel=fuel)
        self._ctx: dict = {}
        self._ty: dict = {}
        self._tm: dict = {}

    # contexts

    def ctx(self, gamma: Context) -> Presheaf:
        hit = self._ctx.get(gamma)
        if hit is None:
            hit = self._ctx[gamma] = self._interp_ctx(gamma)
        return hit

    def _interp_ctx(self, gamma: Context) -> Presheaf:
        if len(gamma) == 0:
            return terminal(self.depth)
        prefix, last = gamma[:-1], gamma[len(gamma) - 1]
        if isinstance(last, Lock):
            return model.L(self.ctx(prefix))
        return self.ty(prefix, last.type).obj

    def projection(self, gamma: Context, binds) -> Morphism:
        """``p ∘ ... ∘ p`` from ``gamma + binds`` down to ``gamma``."""
        m = identity(self.ctx(gamma + binds))
        for i in range(len(binds) - 1, -1, -1):
            step = self.ty(gamma + binds[:i], binds[i].type).p
            m = compose(step, m)
        return m

    # types

    def ty(self, gamma: Context, a: Expr) -> GiraudFamily:
        k = (gamma, a)
        hit = self._ty.get(k)
        if hit is None:
            hit = self._ty[k] = self._interp_ty(gamma, a)
        return hit

    def _interp_ty(self, gamma: Context, a: Expr) -> GiraudFamily:
        g = self.ctx(gamma)
        match whnf(a, Fuel(self.kernel.fuel)):
            case BoolT():
                return bool_family(g)
            case UnitT():
                return unit_family(g)
            case Box(inner):
                return model.dra_type(g, self.ty(gamma.lock(), inner))
            case Pi(x, dom, cod):
                z, (cod,) = freshen_binder(gamma, x, cod)
                return pi_family(g, self.ty(gamma, dom), self.ty(gamma.bind(z, dom), cod))
            case Univ() | El():
                raise OutOfFragment(f"no interpretation for universe type {pretty(a)}")
        raise ModelError(f"{pretty(a)} is not a type")

    # terms

    def tm(self, gamma: Context, t: Expr, a: Expr) -> Morphism:
        k = (gamma, t, a)
        hit = self._tm.get(k)
        if hit is None:
            hit = self._tm[k] = self._interp_tm(gamma, t, a)
        return hit

    def _whnf(self, e: Expr) -> Expr:
        return whnf(e, Fuel(self.kernel.fuel))

    def _infer(self, gamma: Context, t: Expr) -> Expr:
        try:
            return self.kernel.infer(gamma, t)
        except TypeCheckError as exc:
            raise ModelError(f"undefined: {exc}") from None

    def _interp_tm(self, gamma: Context, t: Expr, a: Expr) -> Morphism:
        g = self.ctx(gamma)
        match t:
            case Var(name):
                binds = []
                for i in range(len(gamma) - 1, -1, -1):
                    entry = gamma[i]
                    if isinstance(entry, Lock):
                        raise ModelError(f"undefined: {name} is behind a lock")
                    if entry.name == name:
                        head = gamma[: i + 1]
                        fam = self.ty(gamma[:i], entry.type)
                        return compose(fam.q, self.projection(head, tuple(reversed(binds))))
                    binds.append(entry)
                raise ModelError(f"undefined: unbound {name}")
            case Lam(x, body, _):
                pi = self._whnf(a)
                if not isinstance(pi, Pi):
                    raise ModelError("undefined: abstraction at a non-function type")
                z = lam_binder(gamma, x, body, pi)
                body = subst(body, Var(z), x)
                cod = subst(pi.cod, Var(z), pi.name)
                ext = gamma.bind(z, pi.dom)
                fa, fb = self.ty(gamma, pi.dom), self.ty(ext, cod)
                return pi_lam(g, fa, fb, self.tm(ext, body, cod))
            case App(fn, arg):
                pi = self._whnf(self._infer(gamma, fn))
                if not isinstance(pi, Pi):
                    raise ModelError("undefined: application of a non-function")
                z, (cod,) = freshen_binder(gamma, pi.name, pi.cod)
                fa = self.ty(gamma, pi.dom)
                fb = self.ty(gamma.bind(z, pi.dom), cod)
                return pi_app(g, fa, fb, self.tm(gamma, fn, pi), self.tm(gamma, arg, pi.dom))
            case Shut(body):
                box = self._whnf(a)
                if not isinstance(box, Box):
                    raise ModelError("undefined: shut at a non-box type")
                locked = gamma.lock()
                inner = self.ty(locked, box.body)
                return model.dra_bar(g, inner, self.tm(locked, body, box.body))
            case Open(body):
                split = split_at_last_lock(gamma)
                if split is None:
                    raise ModelError("undefined: open with no lock")
                prefix, suffix = split
                box = self._whnf(self._infer(prefix, body))
                if not isinstance(box, Box):
                    raise ModelError("undefined: open of a non-box")
                inner = self.ty(prefix.lock(), box.body)
                c = model.dra_unbar(self.ctx(prefix), inner, self.tm(prefix, body, box))
                return compose(c, self.projection(prefix.lock(), tuple(suffix)))
            case BTrue():
                return constant_element(g, bool_family(g).total, True)
            case BFalse():
                return constant_element(g, bool_family(g).total, False)
            case UStar():
                return constant_element(g, terminal(self.depth), ())
            case If(z, motive, scrut, then, else_):
                s = self.tm(gamma, scrut, BOOL)
                yes = self.tm(gamma, then, subst(motive, TRUE, z))
                no = self.tm(gamma, else_, subst(motive, FALSE, z))
                if yes.dst != no.dst:
                    raise ModelError("undefined: branches land in different families")
                return Morphism(
                    g, yes.dst, lambda n, x: yes(n, x) if s(n, x) else no(n, x), check=False
                )
            case Code(_):
                raise OutOfFragment("no interpretation for codes")
        raise ModelError(f"undefined: {pretty(t)} is not a term")

    # weakening, exchange and substitution as context morphisms

    def weakening(self, gamma: Context, x: str, a: Expr, rest: Context) -> Morphism:
        """``[[gamma, x:a, rest]] -> [[gamma, rest]]``."""
        if len(rest) == 0:
            return self.ty(gamma, a).p
        init, last = rest[:-1], rest[len(rest) - 1]
        inner = self.weakening(gamma, x, a, init)
        if isinstance(last, Lock):
            return model.L_mor(inner)
        big = gamma.bind(x, a) + init
        fam_big = self.ty(big, last.type)
        fam_small = self.ty(gamma + init, last.type)
        return fam_small.pair(compose(inner, fam_big.p), fam_big.q)

    def exchange(self, gamma: Context, x: str, a: Expr, y: str, b: Expr, rest: Context) -> Morphism:
        """``[[gamma, y:b, x:a, rest]] -> [[gamma, x:a, y:b, rest]]``."""
        if len(rest) == 0:
            fb = self.ty(gamma, b)
            fa_after = self.ty(gamma.bind(y, b), a)
            fa = self.ty(gamma, a)
            first = fa.pair(compose(fb.p, fa_after.p), fa_after.q)
            fb_after = self.ty(gamma.bind(x, a), b)
            return fb_after.pair(first, compose(fb.q, fa_after.p))
        init, last = rest[:-1], rest[len(rest) - 1]
        inner = self.exchange(gamma, x, a, y, b, init)
        if isinstance(last, Lock):
            return model.L_mor(inner)
        swapped = gamma.bind(y, b).bind(x, a) + init
        straight = gamma.bind(x, a).bind(y, b) + init
        fam_sw = self.ty(swapped, last.type)
        return self.ty(straight, last.type).pair(compose(inner, fam_sw.p), fam_sw.q)

    def substitution(self, gamma: Context, x: str, a: Expr, rest: Context, t: Expr) -> Morphism:
        """``[[gamma, rest[t/x]]] -> [[gamma, x:a, rest]]``."""
        if len(rest) == 0:
            fa = self.ty(gamma, a)
            return fa.pair(identity(self.ctx(gamma)), self.tm(gamma, t, a))
        init, last = rest[:-1], rest[len(rest) - 1]
        inner = self.substitution(gamma, x, a, init, t)
        if isinstance(last, Lock):
            return model.L_mor(inner)
        small = gamma + Context(subst_ctx(init.entries, t, x))
        fam_small = self.ty(small, subst(last.type, t, x))
        big = gamma.bind(x, a) + init
        return self.ty(big, last.type).pair(compose(inner, fam_small.p), fam_small.q)



def interp_ctx(gamma: Context, depth: int = 3) -> Presheaf:
    return Interpretation(depth).ctx(gamma)


def interp_type(gamma: Context, a: Expr, depth: int = 3) -> GiraudFamily:
    return Interpretation(depth).ty(gamma, a)


def interp_term(gamma: Context, t: Expr, a: Expr, depth: int = 3) -> Morphism:
    return Interpretation(depth).tm(gamma, t, a)


# ---------------------------------------------------------------------------
# soundness oracle


@dataclass
class SoundnessEntry:
    kind: str  # "defined", "equal", "distinct", "fragment", "kernel"
    name: str
    ok: bool
    detail: str = ""


@dataclass
class SoundnessReport:
    depth: int
    entries: list = field(default_factory=list)

    def add(self, kind, name, ok, detail=""):
        self.entries.append(SoundnessEntry(kind, name, ok, detail))

    def count(self, kind: str) -> int:
        return sum(1 for e in self.entries if e.kind == kind)

    @property
    def violations(self) -> list:
        return [e for e in self.entries if not e.ok and e.kind != "fragment"]

    @property
    def fragment(self) -> list:
        return [e for e in self.entries if e.kind == "fragment"]

    @property
    def ok(self) -> bool:
        return not self.violations


def _in_fragment(gamma: Context, *es: Expr) -> bool:
    if any(mentions_universe(e) for e in es):
        return False
    return not any(isinstance(b, Bind) and mentions_universe(b.type) for b in gamma)


def _equation_sites(trace) -> list:
    """Contexted equations suggested by a typing trace: head redexes and both eta laws."""
    seen, out = set(), []
    for j in trace:
        if not isinstance(j, HasType):
            continue
        gamma, t, a = j.gamma, j.term, j.type
        if not _in_fragment(gamma, t, a):
            continue
        cands = []
        reduct = whnf(t, Fuel(DEFAULT_FUEL))
        if reduct != t:
            cands.append(("reduction", reduct))
        ty = whnf(a, Fuel(DEFAULT_FUEL))
        if isinstance(ty, Pi):
            z = fresh(ty.name, gamma.names() | free_vars(t))
            cands.append(("eta-function", Lam(z, App(annotate(t, ty), Var(z)))))
        elif isinstance(ty, Box):
            cands.append(("eta-box", Shut(Open(annotate(t, ty)))))
        for kind, other in cands:
            k = (gamma, t, other, a)
            if k not in seen:
                seen.add(k)
                out.append((kind, gamma, t, other, a))
    return out


def soundness_check(src: SourceFile, depth: int = 3, fuel: int = DEFAULT_FUEL) -> SoundnessReport:
    """Denotations of checked declarations exist, and conv-equal things denote alike."""
    report = SoundnessReport(depth)
    sem = Interpretation(depth, fuel)
    decls = elaborate(src)
    good: list[Decl] = []
    empty = Context()
    for d in decls:
        trace: list = []
        k = Kernel(fuel=fuel, trace=trace)
        try:
            k.check_decl(d.annotation, d.body)
        except (TypeCheckError, FuelExhausted) as exc:
            report.add("kernel", d.name, False, str(exc))
            continue
        if not _in_fragment(empty, d.annotation, d.body):
            report.add("fragment", d.name, False, "uses universe syntax")
            continue
        try:
            fam = sem.ty(empty, d.annotation)
            val = sem.tm(empty, d.body, d.annotation)
            report.add("defined", d.name, fam.is_element(val))
        except (ModelError, OutOfFragment) as exc:
            report.add("defined", d.name, False, str(exc))
            continue
        good.append(d)

        nf = normalize(d.body, Fuel(fuel))
        _compare(report, sem, k, f"{d.name}: normal form", empty, d.body, nf, d.annotation)
        for kind, gamma, t, other, a in _equation_sites(trace):
            _compare(report, sem, k, f"{d.name}: {kind} {pretty(t)}", gamma, t, other, a)

    # Declared pairs: same annotation, compared both ways.
    k = Kernel(fuel=fuel)
    for i, d1 in enumerate(good):
        for d2 in good[i + 1 :]:
            if not alpha_eq(d1.annotation, d2.annotation):
                continue
            name = f"{d1.name} ~ {d2.name}"
            same = sem.tm(empty, d1.body, d1.annotation) == sem.tm(empty, d2.body, d1.annotation)
            if k.conv_term(empty, d1.annotation, d1.body, d2.body):
                report.add("equal", name, same, "" if same else "conv-equal but denotations differ")
            elif not same:
                report.add("distinct", name, True, "conv and model both distinguish")
    return report


def _compare(report, sem, kernel, name, gamma, t, u, a):
    try:
        if not kernel.holds(HasType(gamma, u, a)):
            report.add("equal", name, False, "contractum does not check")
            return
        if not kernel.conv_term(gamma, a, t, u):
            report.add("equal", name, False, "conversion does not identify the pair")
            return
        same = sem.tm(gamma, t, a) == sem.tm(gamma, u, a)
    except (ModelError, OutOfFragment, FuelExhausted) as exc:
        report.add("equal", name, False, str(exc))
        return
    report.add("equal", name, same, "" if same else "denotations differ")
