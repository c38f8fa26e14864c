"""Property suites driven by the bundled corpus.

* structural rules (exchange, weakening, substitution, presupposition of
  typing and of equations), replayed on every judgment the checker derives;
* the computation and extensionality equations, instantiated on corpus
  subterms and decided by conversion.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Optional

from .conversion import DEFAULT_FUEL, Fuel, FuelExhausted, whnf
from .kernel import HasType, Kernel, TermEq, TypeAt, TypeCheckError, TypeEq
from .surface import SourceFile, annotate, elaborate, parse
from .syntax import (
    BOOL,
    FALSE,
    STAR,
    TRUE,
    UNIT,
    App,
    Bind,
    Box,
    Code,
    Context,
    El,
    Expr,
    Lam,
    Lock,
    Open,
    Pi,
    Shut,
    Univ,
    UnitT,
    BoolT,
    Var,
    free_vars,
    fresh,
    subst,
    subst_ctx,
)

_EXPECT = re.compile(r"^--\s*expect:\s*([A-Z_]+)", re.M)


def corpus_dir() -> Path:
    return Path(str(resources.files("fitchmtt") / "corpus"))


def corpus_files(kind: str) -> list[Path]:
    """Sorted ``.mtt`` files of the ``accept`` or ``reject`` corpus."""
    return sorted((corpus_dir() / kind).glob("*.mtt"))


def load(path: Path) -> SourceFile:
    return parse(path.read_text(encoding="utf-8"))


def expected_code(path: Path) -> Optional[str]:
    m = _EXPECT.search(path.read_text(encoding="utf-8"))
    return m.group(1) if m else None


@dataclass(frozen=True)
class TracedDecl:
    name: str
    annotation: Expr
    body: Expr
    trace: tuple


def traced_corpus(fuel: int = DEFAULT_FUEL, files=None) -> list[TracedDecl]:
    """Check every accepted declaration, keeping the judgments derived on the way."""
    out = []
    for path in files if files is not None else corpus_files("accept"):
        for d in elaborate(load(path)):
            trace: list = []
            Kernel(fuel=fuel, trace=trace).check_decl(d.annotation, d.body)
            out.append(TracedDecl(d.name, d.annotation, d.body, tuple(dict.fromkeys(trace))))
    return out


def derived_judgments(decls) -> list:
    seen = {}
    for d in decls:
        for j in d.trace:
            seen.setdefault(j, None)
    return list(seen)


# ---------------------------------------------------------------------------
# closed and open inhabitants


def inhabitants(kernel: Kernel, gamma: Context, a: Expr, depth: int = 2, limit: int = 3) -> list[Expr]:
    """A few terms of type ``a`` in ``gamma``: accessible variables, then canonical terms."""
    out: list[Expr] = []
    for i in range(len(gamma) - 1, -1, -1):
        e = gamma[i]
        if isinstance(e, Lock):
            break
        try:
            if kernel.conv_type(gamma, e.type, a):
                out.append(Var(e.name))
        except FuelExhausted:
            pass
    if depth > 0:
        out.extend(_canonical(kernel, gamma, whnf(a, Fuel(kernel.fuel)), depth))
    return out[:limit]


def _canonical(kernel, gamma, a, depth):
    match a:
        case BoolT():
            return [TRUE, FALSE]
        case UnitT():
            return [STAR]
        case Univ(0):
            return [Code(BOOL), Code(UNIT)]
        case Univ(n):
            return [Code(Univ(n - 1))]
        case Box(inner):
            return [Shut(u) for u in inhabitants(kernel, gamma.lock(), inner, depth - 1, 2)]
        case Pi(x, dom, cod):
            z = fresh(x, gamma.names() | free_vars(cod))
            ext = gamma.bind(z, dom)
            return [Lam(z, c, dom) for c in inhabitants(kernel, ext, subst(cod, Var(z), x), depth - 1, 2)]
        case El(u):
            uw = whnf(u, Fuel(kernel.fuel))
            if isinstance(uw, Code):
                return inhabitants(kernel, gamma, uw.ty, depth - 1, 2)
    return []


# ---------------------------------------------------------------------------
# structural properties


@dataclass
class PropertyResult:
    name: str
    instances: int = 0
    violations: int = 0
    examples: list = field(default_factory=list)

    def add(self, ok: bool, what):
        self.instances += 1
        if not ok:
            self.violations += 1
            if len(self.examples) < 3:
                self.examples.append(what)


STRUCTURAL = ("exchange", "weakening", "substitution", "type-presupposition", "equation-presupposition")


def _subject(j):
    if isinstance(j, HasType):
        return j.gamma, (j.term, j.type)
    return j.gamma, (j.type,)


def _rebuild(j, gamma, f):
    if isinstance(j, HasType):
        return HasType(gamma, f(j.term), f(j.type))
    return TypeAt(gamma, f(j.type), j.level)


def _exchanges(j) -> Iterator:
    gamma, _ = _subject(j)
    es = gamma.entries
    for i in range(len(es) - 1):
        x, y = es[i], es[i + 1]
        if isinstance(x, Bind) and isinstance(y, Bind) and x.name not in free_vars(y.type):
            swapped = Context(es[:i] + (y, x) + es[i + 2 :])
            yield _rebuild(j, swapped, lambda e: e)


_WEAKEN_TYPES = (BOOL, Box(BOOL), Pi("_", UNIT, BOOL))


def _weakenings(j) -> Iterator:
    gamma, parts = _subject(j)
    avoid = gamma.names()
    for p in parts:
        avoid |= free_vars(p)
    z = fresh("w", avoid)
    es = gamma.entries
    for k in range(len(es) + 1):
        for t in _WEAKEN_TYPES:
            g = Context(es[:k] + (Bind(z, t),) + es[k:])
            yield _rebuild(j, g, lambda e: e)


def _substitutions(kernel, j) -> Iterator:
    gamma, _ = _subject(j)
    es = gamma.entries
    for i, e in enumerate(es):
        if not isinstance(e, Bind):
            continue
        prefix = Context(es[:i])
        for u in inhabitants(kernel, prefix, e.type, limit=2):
            rest = subst_ctx(es[i + 1 :], u, e.name)
            yield _rebuild(j, prefix + rest, lambda t, u=u, x=e.name: subst(t, u, x))


def structural_suite(decls, fuel: int = DEFAULT_FUEL, cap: int = 4000) -> dict:
    """Replay each derived judgment under exchange, weakening and substitution."""
    kernel = Kernel(fuel=fuel)
    results = {name: PropertyResult(name) for name in STRUCTURAL}
    judgments = derived_judgments(decls)

    def run(name, generated):
        r = results[name]
        for g in generated:
            if r.instances >= cap:
                return
            try:
                ok = kernel.holds(g)
            except FuelExhausted:
                ok = False
            r.add(ok, g)

    for j in judgments:
        run("exchange", _exchanges(j))
    for j in judgments:
        run("weakening", _weakenings(j))
    for j in judgments:
        run("substitution", _substitutions(kernel, j))

    # A typed term's type is a type.
    r = results["type-presupposition"]
    for j in judgments:
        if isinstance(j, HasType):
            try:
                kernel.check_ctx(j.gamma)
                kernel.check_type(j.gamma, j.type)
                r.add(True, j)
            except (TypeCheckError, FuelExhausted):
                r.add(False, j)

    # Both sides of a derivable equation are typed.
    r = results["equation-presupposition"]
    for rule, eqs in equality_instances(decls, kernel).items():
        for eq in eqs:
            try:
                if not _decide(kernel, eq):
                    continue
                if isinstance(eq, TermEq):
                    ok = kernel.holds(HasType(eq.gamma, eq.left, eq.type)) and kernel.holds(
                        HasType(eq.gamma, eq.right, eq.type)
                    )
                else:
                    ok = _is_type(kernel, eq.gamma, eq.left) and _is_type(kernel, eq.gamma, eq.right)
            except FuelExhausted:
                ok = False
            r.add(ok, eq)
    return results


def _is_type(kernel, gamma, a) -> bool:
    try:
        kernel.check_type(gamma, a)
        return True
    except TypeCheckError:
        return False


# ---------------------------------------------------------------------------
# equations


EQUATIONS = ("beta-function", "beta-box", "eta-function", "eta-box", "el-code", "code-el")


def _dedupe(xs):
    return list(dict.fromkeys(xs))


def equality_instances(decls, kernel: Optional[Kernel] = None) -> dict:
    """Instances of each equation, built from corpus judgments."""
    kernel = kernel or Kernel()
    out = {name: [] for name in EQUATIONS}
    judgments = derived_judgments(decls)
    for j in judgments:
        if isinstance(j, TypeAt):
            # El (code A) = A, and code (El (code A)) = code A at U n.
            out["el-code"].append(TypeEq(j.gamma, El(Code(j.type)), j.type))
            out["code-el"].append(TermEq(j.gamma, Code(El(Code(j.type))), Code(j.type), Univ(j.level)))
            continue
        gamma, t, a = j.gamma, j.term, j.type
        aw = whnf(a, Fuel(kernel.fuel))
        t_inf = annotate(t, aw)
        if isinstance(aw, Pi):
            z = fresh(aw.name, gamma.names() | free_vars(t))
            out["eta-function"].append(TermEq(gamma, t, Lam(z, App(t_inf, Var(z))), a))
        elif isinstance(aw, Box):
            out["eta-box"].append(TermEq(gamma, t, Shut(Open(t_inf)), a))
        elif isinstance(aw, Univ):
            out["code-el"].append(TermEq(gamma, Code(El(t)), t, a))
        # open (shut t) = t, one lock right of where t lives.
        if len(gamma) and isinstance(gamma[len(gamma) - 1], Lock):
            out["beta-box"].append(TermEq(gamma, Open(Shut(t_inf)), t, a))
            z = fresh("w", gamma.names() | free_vars(t) | free_vars(a))
            out["beta-box"].append(TermEq(gamma.bind(z, BOOL), Open(Shut(t_inf)), t, a))
        # (\(x : A). b) u = b[u/x] where the judgment's last binding is x : A.
        if len(gamma) and isinstance(gamma[len(gamma) - 1], Bind):
            x = gamma[len(gamma) - 1]
            prefix = gamma[:-1]
            for u in inhabitants(kernel, prefix, x.type, limit=2):
                redex = App(Lam(x.name, annotate(t, a), x.type), u)
                out["beta-function"].append(
                    TermEq(prefix, redex, subst(t, u, x.name), subst(a, u, x.name))
                )
        # (\(z : A). z) t = t
        z = fresh("z", gamma.names() | free_vars(t))
        out["beta-function"].append(TermEq(gamma, App(Lam(z, Var(z), a), t), t, a))
    for name in out:
        out[name] = _dedupe(out[name])
    return out


def _decide(kernel: Kernel, eq) -> bool:
    return kernel.holds(eq)


@dataclass
class EquationResult:
    name: str
    instances: int = 0
    violations: int = 0
    fuel_exhausted: int = 0
    examples: list = field(default_factory=list)


def equality_suite(decls, fuel: int = DEFAULT_FUEL) -> dict:
    kernel = Kernel(fuel=fuel)
    results = {}
    for name, eqs in equality_instances(decls, kernel).items():
        r = results[name] = EquationResult(name)
        for eq in eqs:
            r.instances += 1
            try:
                ok = kernel.holds(eq)
            except FuelExhausted:
                r.fuel_exhausted += 1
                ok = False
            if not ok:
                r.violations += 1
                if len(r.examples) < 3:
                    r.examples.append(eq)
    return results
