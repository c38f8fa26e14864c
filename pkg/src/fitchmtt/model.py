"""Finite presheaves on the chain 0 < 1 < ... < N-1 and the constant modality.

Contexts are presheaves.  A family over Γ is a Giraud pair ``u : Γ -> U`` and
``v : E -> U``; its comprehension is the pullback of the pair, reindexing is
precomposition, so all the reindexing laws hold as equalities of tables.

The modality is the adjunction ``L ⊣ R`` where ``L X`` is ``X(0)`` at every
stage and ``R X`` is the set of compatible tuples, again at every stage.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Optional

Elem = object


class ModelError(Exception):
    """A semantic construction was applied outside its domain."""


class OutOfFragment(Exception):
    """Universe syntax has no interpretation in this model."""


# ---------------------------------------------------------------------------
# presheaves and natural transformations


class Presheaf:
    """Stage sets ``stages[n]`` and one-step restrictions ``stage n -> stage n-1``."""

    __slots__ = ("stages", "restrict", "_members", "_key", "__dict__")

    def __init__(self, stages: Iterable[Iterable[Elem]], restrict: Iterable[dict], check: bool = True):
        self.stages = tuple(tuple(s) for s in stages)
        if not self.stages:
            raise ModelError("a presheaf needs at least one stage")
        self.restrict = (None,) + tuple(dict(r) for r in restrict)
        self._members = tuple(frozenset(s) for s in self.stages)
        if check:
            if len(self.restrict) != len(self.stages):
                raise ModelError("need one restriction map per positive stage")
            for n, s in enumerate(self.stages):
                if len(self._members[n]) != len(s):
                    raise ModelError(f"repeated element at stage {n}")
                if n == 0:
                    continue
                r = self.restrict[n]
                for x in s:
                    if x not in r or r[x] not in self._members[n - 1]:
                        raise ModelError(f"restriction at stage {n} is not total on {x!r}")
        self._key = None

    @property
    def depth(self) -> int:
        return len(self.stages)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.stages)

    def has(self, n: int, x: Elem) -> bool:
        return x in self._members[n]

    def res(self, x: Elem, n: int) -> Elem:
        """Restrict ``x`` from stage n to stage n-1."""
        return self.restrict[n][x]

    def res_to(self, x: Elem, n: int, m: int) -> Elem:
        while n > m:
            x = self.restrict[n][x]
            n -= 1
        return x

    @property
    def key(self):
        if self._key is None:
            self._key = (
                self._members,
                tuple(frozenset(r.items()) for r in self.restrict[1:]),
            )
        return self._key

    def __eq__(self, other):
        return self is other or (isinstance(other, Presheaf) and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Presheaf(sizes={self.sizes()})"


class Morphism:
    """Natural transformation, tabulated per stage."""

    __slots__ = ("src", "dst", "comps", "_key")

    def __init__(self, src: Presheaf, dst: Presheaf, comps, check: bool = True):
        if src.depth != dst.depth:
            raise ModelError("morphism between presheaves of different depth")
        if callable(comps):
            f = comps
            comps = [{x: f(n, x) for x in src.stages[n]} for n in range(src.depth)]
        self.src, self.dst = src, dst
        self.comps = tuple(dict(c) for c in comps)
        self._key = None
        if check:
            self._validate()

    def _validate(self):
        src, dst = self.src, self.dst
        if len(self.comps) != src.depth:
            raise ModelError("need one component per stage")
        for n, c in enumerate(self.comps):
            for x in src.stages[n]:
                if x not in c or not dst.has(n, c[x]):
                    raise ModelError(f"component {n} is not total into the codomain at {x!r}")
                if n and dst.res(c[x], n) != self.comps[n - 1][src.res(x, n)]:
                    raise ModelError(f"naturality fails at stage {n} on {x!r}")

    def __call__(self, n: int, x: Elem) -> Elem:
        return self.comps[n][x]

    @property
    def key(self):
        if self._key is None:
            self._key = (self.src.key, self.dst.key, tuple(frozenset(c.items()) for c in self.comps))
        return self._key

    def __eq__(self, other):
        return self is other or (isinstance(other, Morphism) and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Morphism({self.src.sizes()} -> {self.dst.sizes()})"


def terminal(depth: int) -> Presheaf:
    return _terminal(depth)


@lru_cache(maxsize=None)
def _terminal(depth: int) -> Presheaf:
    return constant(depth, [()])


def constant(depth: int, elems: Iterable[Elem]) -> Presheaf:
    elems = tuple(elems)
    return Presheaf([elems] * depth, [{x: x for x in elems}] * (depth - 1))


def identity(x: Presheaf) -> Morphism:
    return Morphism(x, x, [{e: e for e in s} for s in x.stages], check=False)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g ∘ f``."""
    if f.dst != g.src:
        raise ModelError("composing morphisms whose ends do not meet")
    return Morphism(
        f.src, g.dst, [{x: gc[fc[x]] for x in fc} for fc, gc in zip(f.comps, g.comps)], check=False
    )


def bang(x: Presheaf) -> Morphism:
    return Morphism(x, terminal(x.depth), [{e: () for e in s} for s in x.stages], check=False)


def homs(
    src: Presheaf, dst: Presheaf, allowed: Optional[Callable[[int, Elem, Elem], bool]] = None
) -> Iterator[Morphism]:
    """Every natural transformation ``src -> dst``, optionally filtered pointwise.

    Built stage by stage so naturality prunes the search.
    """
    depth = src.depth

    def choices(n, prev, x):
        out = []
        for y in dst.stages[n]:
            if n and dst.res(y, n) != prev[src.res(x, n)]:
                continue
            if allowed is not None and not allowed(n, x, y):
                continue
            out.append(y)
        return out

    def go(n, acc):
        if n == depth:
            yield Morphism(src, dst, acc, check=False)
            return
        prev = acc[-1] if acc else None
        xs = src.stages[n]
        opts = [choices(n, prev, x) for x in xs]
        for pick in itertools.product(*opts):
            yield from go(n + 1, acc + [dict(zip(xs, pick))])

    yield from go(0, [])


# ---------------------------------------------------------------------------
# pullbacks


class Pullback:
    """Stagewise fiber product of ``u : Γ -> U`` and ``v : E -> U``."""

    def __init__(self, u: Morphism, v: Morphism):
        if u.dst != v.dst:
            raise ModelError("pullback of morphisms with different codomains")
        gamma, e = u.src, v.src
        stages = [
            [(g, x) for g in gamma.stages[n] for x in e.stages[n] if u(n, g) == v(n, x)]
            for n in range(gamma.depth)
        ]
        restrict = [
            {(g, x): (gamma.res(g, n), e.res(x, n)) for (g, x) in stages[n]}
            for n in range(1, gamma.depth)
        ]
        self.u, self.v = u, v
        self.obj = Presheaf(stages, restrict, check=False)
        self.p = Morphism(self.obj, gamma, lambda n, gx: gx[0], check=False)
        self.q = Morphism(self.obj, e, lambda n, gx: gx[1], check=False)

    def pair(self, gamma: Morphism, a: Morphism) -> Morphism:
        """The mediating map ``Δ -> P`` of a commuting square."""
        if gamma.dst != self.u.src or a.dst != self.v.src or gamma.src != a.src:
            raise ModelError("pairing: ends do not match the pullback")
        if compose(self.u, gamma) != compose(self.v, a):
            raise ModelError("pairing: square does not commute")
        return Morphism(
            gamma.src, self.obj, lambda n, d: (gamma(n, d), a(n, d)), check=False
        )


def pullback(u: Morphism, v: Morphism) -> Pullback:
    return Pullback(u, v)


# ---------------------------------------------------------------------------
# the adjunction L ⊣ R


def L(x: Presheaf) -> Presheaf:
    return _L(x)


@lru_cache(maxsize=4096)
def _L(x: Presheaf) -> Presheaf:
    return constant(x.depth, x.stages[0])


def L_mor(f: Morphism) -> Morphism:
    return Morphism(L(f.src), L(f.dst), [f.comps[0]] * f.src.depth, check=False)


def R(x: Presheaf) -> Presheaf:
    return _R(x)


@lru_cache(maxsize=4096)
def _R(x: Presheaf) -> Presheaf:
    # Compatible tuples (x_0, ..., x_{N-1}) with x_{k+1} restricting to x_k.
    tuples = [(a,) for a in x.stages[0]]
    for k in range(1, x.depth):
        tuples = [t + (b,) for t in tuples for b in x.stages[k] if x.res(b, k) == t[-1]]
    return constant(x.depth, tuples)


def R_mor(f: Morphism) -> Morphism:
    src, dst = R(f.src), R(f.dst)

    def act(n, t):
        return tuple(f.comps[k][t[k]] for k in range(len(t)))

    return Morphism(src, dst, act, check=False)


def eta(x: Presheaf) -> Morphism:
    """Unit ``x -> R L x``: an element goes to the constant tuple at its stage-0 restriction."""
    depth = x.depth
    return Morphism(x, R(L(x)), lambda n, e: (x.res_to(e, n, 0),) * depth, check=False)


def eps(x: Presheaf) -> Morphism:
    """Counit ``L R x -> x``: a compatible tuple goes to its entry at the current stage."""
    return Morphism(L(R(x)), x, lambda n, t: t[n], check=False)


def transpose_right(delta: Presheaf, f: Morphism) -> Morphism:
    """``L Δ -> Γ`` to ``Δ -> R Γ``."""
    return compose(R_mor(f), eta(delta))


def transpose_left(gamma: Presheaf, g: Morphism) -> Morphism:
    """``Δ -> R Γ`` to ``L Δ -> Γ``."""
    return compose(eps(gamma), L_mor(g))


# ---------------------------------------------------------------------------
# families


class GiraudFamily:
    """A family over ``u.src`` presented by ``u : Γ -> U`` and ``v : E -> U``."""

    __slots__ = ("u", "v", "__dict__")

    def __init__(self, u: Morphism, v: Morphism):
        if u.dst != v.dst:
            raise ModelError("family: u and v must share a codomain")
        self.u, self.v = u, v

    @property
    def base(self) -> Presheaf:
        return self.u.src

    @property
    def universe(self) -> Presheaf:
        return self.u.dst

    @property
    def total(self) -> Presheaf:
        return self.v.src

    @cached_property
    def comprehension(self) -> Pullback:
        return Pullback(self.u, self.v)

    @property
    def obj(self) -> Presheaf:
        return self.comprehension.obj

    @property
    def p(self) -> Morphism:
        return self.comprehension.p

    @property
    def q(self) -> Morphism:
        return self.comprehension.q

    def pair(self, gamma: Morphism, a: Morphism) -> Morphism:
        return self.comprehension.pair(gamma, a)

    def reindex(self, gamma: Morphism) -> "GiraudFamily":
        if gamma.dst != self.base:
            raise ModelError("reindexing along a morphism into the wrong base")
        return GiraudFamily(compose(self.u, gamma), self.v)

    def fiber(self, n: int, g: Elem) -> list[Elem]:
        w = self.u(n, g)
        return [e for e in self.total.stages[n] if self.v(n, e) == w]

    def elements(self) -> Iterator[Morphism]:
        u, v = self.u, self.v
        return homs(self.base, self.total, lambda n, x, y: v(n, y) == u(n, x))

    def is_element(self, a: Morphism) -> bool:
        return a.src == self.base and a.dst == self.total and compose(self.v, a) == self.u

    @property
    def key(self):
        return (self.u.key, self.v.key)

    def __eq__(self, other):
        return self is other or (isinstance(other, GiraudFamily) and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"GiraudFamily(base={self.base.sizes()}, total={self.total.sizes()})"


def reindex_family(a: GiraudFamily, gamma: Morphism) -> GiraudFamily:
    return a.reindex(gamma)


def reindex_element(a: Morphism, gamma: Morphism) -> Morphism:
    return compose(a, gamma)


# ---------------------------------------------------------------------------
# R as a weak morphism of families, and the modality built from it


def r_family(a: GiraudFamily) -> GiraudFamily:
    return GiraudFamily(R_mor(a.u), R_mor(a.v))


def r_element(a: Morphism) -> Morphism:
    return R_mor(a)


def nu(a: GiraudFamily) -> Morphism:
    """Inverse of the comparison ``(R p, R q) : R(Γ.A) -> RΓ.RA``."""
    return _nu(a)


@lru_cache(maxsize=4096)
def _nu(a: GiraudFamily) -> Morphism:
    ra = r_family(a)
    cmp = ra.pair(R_mor(a.p), R_mor(a.q))
    inverse = []
    for n, c in enumerate(cmp.comps):
        inv = {y: x for x, y in c.items()}
        if len(inv) != len(c) or len(inv) != len(cmp.dst.stages[n]):
            raise ModelError(f"comparison map is not invertible at stage {n}")
        inverse.append(inv)
    return Morphism(cmp.dst, cmp.src, inverse, check=False)


def dra_type(gamma: Presheaf, a: GiraudFamily) -> GiraudFamily:
    """``R_Γ A = (R A)[η]`` for a family A over ``L Γ``."""
    if a.base != L(gamma):
        raise ModelError("modal family: A must live over L Γ")
    return r_family(a).reindex(eta(gamma))


def dra_bar(gamma: Presheaf, a: GiraudFamily, t: Morphism) -> Morphism:
    """Transpose an element of A (over L Γ) to an element of ``R_Γ A``."""
    return compose(R_mor(t), eta(gamma))


def dra_unbar(gamma: Presheaf, a: GiraudFamily, b: Morphism) -> Morphism:
    """Transpose an element of ``R_Γ A`` back to an element of A over L Γ."""
    ra = r_family(a)
    into_limit = compose(nu(a), ra.pair(eta(gamma), b))
    return compose(a.q, compose(eps(a.obj), L_mor(into_limit)))


@dataclass(frozen=True)
class DraStructure:
    """The modality packaged as operations; each call goes through the module functions."""

    depth: int

    def L(self, x):
        return L(x)

    def R(self, x):
        return R(x)

    def unit(self, x):
        return eta(x)

    def counit(self, x):
        return eps(x)

    def comparison_inverse(self, a):
        return nu(a)

    def type(self, gamma, a):
        return dra_type(gamma, a)

    def bar(self, gamma, a, t):
        return dra_bar(gamma, a, t)

    def unbar(self, gamma, a, b):
        return dra_unbar(gamma, a, b)


# ---------------------------------------------------------------------------
# dependent products


def _fiber(v: Morphism, m: int, x: Elem) -> list[Elem]:
    return [e for e in v.src.stages[m] if v(m, e) == x]


@lru_cache(maxsize=1024)
def _pi_universe(va: Morphism, vb: Morphism):
    """Local universe for Π over the pair of presentations ``va``, ``vb``.

    ``V(n)`` holds ``(x, g)`` with ``x`` in ``U_A(n)`` and ``g`` a compatible
    choice, for each ``m <= n`` and each ``e`` over ``x|m``, of a point of
    ``U_B(m)``.  ``E(n)`` adds a compatible lift ``h`` of ``g`` through ``v_B``.
    Families are stored as ``g[m] = ((e, w), ...)`` in fiber order.
    """
    ua, ea = va.dst, va.src
    ub, eb = vb.dst, vb.src
    depth = ua.depth

    def extend(prev_layer, m, fib, target, ok):
        """All assignments on ``fib`` into ``target`` compatible with ``prev_layer``."""
        prev = dict(prev_layer) if prev_layer is not None else None
        opts = []
        for e in fib:
            cands = []
            for w in target.stages[m]:
                if prev is not None and target.res(w, m) != prev[ea.res(e, m)]:
                    continue
                if ok is not None and not ok(e, w):
                    continue
                cands.append(w)
            opts.append(cands)
        for pick in itertools.product(*opts):
            yield tuple(zip(fib, pick))

    v_stages, e_stages = [], []
    for n in range(depth):
        vs, es = [], []
        for x in ua.stages[n]:
            xs = [ua.res_to(x, n, m) for m in range(n + 1)]
            fibs = [_fiber(va, m, xs[m]) for m in range(n + 1)]
            gs = [()]
            for m in range(n + 1):
                gs = [
                    g + (layer,)
                    for g in gs
                    for layer in extend(g[-1] if m else None, m, fibs[m], ub, None)
                ]
            for g in gs:
                vs.append((x, g))
                hs = [()]
                for m in range(n + 1):
                    gm = dict(g[m])
                    hs = [
                        h + (layer,)
                        for h in hs
                        for layer in extend(
                            h[-1] if m else None,
                            m,
                            fibs[m],
                            eb,
                            lambda e, w, m=m, gm=gm: vb(m, w) == gm[e],
                        )
                    ]
                es.extend((x, g, h) for h in hs)
        v_stages.append(vs)
        e_stages.append(es)
    v_obj = Presheaf(
        v_stages,
        [{(x, g): (ua.res(x, n), g[:n]) for (x, g) in v_stages[n]} for n in range(1, depth)],
        check=False,
    )
    e_obj = Presheaf(
        e_stages,
        [
            {(x, g, h): (ua.res(x, n), g[:n], h[:n]) for (x, g, h) in e_stages[n]}
            for n in range(1, depth)
        ],
        check=False,
    )
    v = Morphism(e_obj, v_obj, lambda n, xgh: xgh[:2], check=False)
    return v_obj, e_obj, v


def pi_family(gamma: Presheaf, a: GiraudFamily, b: GiraudFamily) -> GiraudFamily:
    """Π of B (over Γ.A) along A (over Γ)."""
    if a.base != gamma or b.base != a.obj:
        raise ModelError("Π: families do not chain over the base")
    v_obj, _, v = _pi_universe(a.v, b.v)

    def code(n, g):
        x = a.u(n, g)
        layers = []
        for m in range(n + 1):
            gm = gamma.res_to(g, n, m)
            fib = _fiber(a.v, m, a.u(m, gm))
            layers.append(tuple((e, b.u(m, (gm, e))) for e in fib))
        return (x, tuple(layers))

    return GiraudFamily(Morphism(gamma, v_obj, code, check=False), v)


def pi_lam(gamma: Presheaf, a: GiraudFamily, b: GiraudFamily, body: Morphism) -> Morphism:
    """Abstraction: an element of B over Γ.A becomes an element of Π A B."""
    pi = pi_family(gamma, a, b)

    def act(n, g):
        x, layers = pi.u(n, g)
        h = []
        for m in range(n + 1):
            gm = gamma.res_to(g, n, m)
            h.append(tuple((e, body(m, (gm, e))) for e, _ in layers[m]))
        return (x, layers, tuple(h))

    return Morphism(gamma, pi.total, act, check=False)


def pi_app(gamma: Presheaf, a: GiraudFamily, b: GiraudFamily, f: Morphism, arg: Morphism) -> Morphism:
    """Application: an element of B reindexed along ``(id, arg)``."""

    def act(n, g):
        _, _, h = f(n, g)
        return dict(h[n])[arg(n, g)]

    return Morphism(gamma, b.total, act, check=False)


# ---------------------------------------------------------------------------
# base types


def bool_family(gamma: Presheaf) -> GiraudFamily:
    return GiraudFamily(bang(gamma), _bool_v(gamma.depth))


@lru_cache(maxsize=None)
def _bool_v(depth: int) -> Morphism:
    return bang(constant(depth, (False, True)))


def unit_family(gamma: Presheaf) -> GiraudFamily:
    return GiraudFamily(bang(gamma), identity(terminal(gamma.depth)))


def constant_element(gamma: Presheaf, target: Presheaf, value: Elem) -> Morphism:
    return Morphism(gamma, target, lambda n, g: value, check=False)


# ---------------------------------------------------------------------------
# random instances


def random_presheaf(rng: random.Random, depth: int, size: int) -> Presheaf:
    """Stage sizes uniform in ``1..size``, restrictions uniform among all functions."""
    stages = [list(range(rng.randint(1, size))) for _ in range(depth)]
    restrict = [{x: rng.choice(stages[n - 1]) for x in stages[n]} for n in range(1, depth)]
    return Presheaf(stages, restrict, check=False)


def random_hom(rng: random.Random, src: Presheaf, dst: Presheaf, allowed=None) -> Optional[Morphism]:
    """Uniform choice among all natural transformations, or None if there are none.

    Uniform over the full enumeration, which is the distribution rejection
    sampling would give.
    """
    options = list(homs(src, dst, allowed))
    return rng.choice(options) if options else None


def random_family(rng: random.Random, base: Presheaf, size: int) -> GiraudFamily:
    depth = base.depth
    for _ in range(20):
        u_obj = random_presheaf(rng, depth, size)
        e_obj = random_presheaf(rng, depth, size)
        v = random_hom(rng, e_obj, u_obj)
        if v is None:
            continue
        if rng.random() < 0.5:
            # Present the family through a chosen section, so it has elements.
            s = random_hom(rng, base, e_obj)
            if s is not None:
                return GiraudFamily(compose(v, s), v)
        u = random_hom(rng, base, u_obj)
        if u is not None:
            return GiraudFamily(u, v)
    return unit_family(base)


# ---------------------------------------------------------------------------
# law checking


@dataclass
class LawResult:
    name: str
    instances: int = 0
    violations: int = 0
    counterexamples: list = field(default_factory=list)


@dataclass
class LawReport:
    depth: int
    size: int
    trials: int
    seed: int
    laws: dict = field(default_factory=dict)

    def record(self, name: str, ok: bool, detail: str = ""):
        r = self.laws.setdefault(name, LawResult(name))
        r.instances += 1
        if not ok:
            r.violations += 1
            if len(r.counterexamples) < 3:
                r.counterexamples.append(detail)

    @property
    def violations(self) -> int:
        return sum(r.violations for r in self.laws.values())

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def merge(self, other: "LawReport"):
        for name, r in other.laws.items():
            mine = self.laws.setdefault(name, LawResult(name))
            mine.instances += r.instances
            mine.violations += r.violations
            mine.counterexamples.extend(r.counterexamples[: 3 - len(mine.counterexamples)])


LAW_NAMES = (
    "pair.projection",
    "pair.generic",
    "pair.precompose",
    "pair.surjective",
    "reindex.family-identity",
    "reindex.family-compose",
    "reindex.element-identity",
    "reindex.element-compose",
    "modal.family-stable",
    "modal.unbar-bar",
    "modal.bar-unbar",
    "modal.bar-natural",
    "modal.unbar-natural",
    "comparison.invertible",
    "comparison.projection",
    "comparison.generic",
    "comparison.pairing",
    "adjunction.triangle-counit",
    "adjunction.triangle-unit",
    "adjunction.hom-bijection",
)

# Cap on how many elements of one family a single trial checks pointwise.
_ELEMENT_CAP = 16


def _law(report: LawReport, name: str, thunk: Callable[[], bool], detail: str):
    try:
        ok = bool(thunk())
    except ModelError as exc:
        ok, detail = False, f"{detail}: {exc}"
    report.record(name, ok, detail)


def check_laws(depth: int, size: int, trials: int, seed: int) -> LawReport:
    """Check every law on ``trials`` random instances; reproducible from ``seed``."""
    if depth < 1 or size < 1:
        raise ValueError("depth and size must be at least 1")
    rng = random.Random(seed)
    report = LawReport(depth, size, trials, seed)
    for name in LAW_NAMES:
        report.laws[name] = LawResult(name)
    for trial in range(trials):
        _trial(rng, report, depth, size, trial)
    return report


def _trial(rng, report, depth, size, trial):
    tag = f"trial {trial}"
    gamma = random_presheaf(rng, depth, size)
    delta = random_presheaf(rng, depth, size)
    phi = random_presheaf(rng, depth, size)
    g = random_hom(rng, delta, gamma)
    d = random_hom(rng, phi, delta)

    # adjunction
    _law(report, "adjunction.triangle-counit",
         lambda: compose(eps(L(gamma)), L_mor(eta(gamma))) == identity(L(gamma)), tag)
    _law(report, "adjunction.triangle-unit",
         lambda: compose(R_mor(eps(gamma)), eta(R(gamma))) == identity(R(gamma)), tag)

    def hom_bijection():
        left = list(homs(L(delta), gamma))
        right = list(homs(delta, R(gamma)))
        if len(left) != len(right):
            return False
        return all(transpose_left(gamma, transpose_right(delta, f)) == f for f in left) and all(
            transpose_right(delta, transpose_left(gamma, h)) == h for h in right
        )

    _law(report, "adjunction.hom-bijection", hom_bijection, tag)

    # comprehension and reindexing for a family over Γ
    a = random_family(rng, gamma, size)
    _law(report, "pair.surjective", lambda: a.pair(a.p, a.q) == identity(a.obj), tag)
    _law(report, "reindex.family-identity", lambda: a.reindex(identity(gamma)) == a, tag)
    elems = _sample(rng, a.elements())
    for t in elems:
        _law(report, "reindex.element-identity", lambda: compose(t, identity(gamma)) == t, tag)
    if g is not None:
        ag = a.reindex(g)
        for t in _sample(rng, ag.elements()):
            pr = a.pair(g, t)
            _law(report, "pair.projection", lambda: compose(a.p, pr) == g, tag)
            _law(report, "pair.generic", lambda: compose(a.q, pr) == t, tag)
            if d is not None:
                _law(report, "pair.precompose",
                     lambda: compose(pr, d) == a.pair(compose(g, d), compose(t, d)), tag)
        if d is not None:
            gd = compose(g, d)
            _law(report, "reindex.family-compose", lambda: a.reindex(gd) == ag.reindex(d), tag)
            for t in elems:
                _law(report, "reindex.element-compose",
                     lambda: compose(t, gd) == compose(compose(t, g), d), tag)

    # R on families: the comparison map and its inverse
    try:
        n_a = nu(a)
    except ModelError as exc:
        report.record("comparison.invertible", False, f"{tag}: {exc}")
        n_a = None
    else:
        report.record("comparison.invertible", True)
    if n_a is not None:
        ra = r_family(a)
        _law(report, "comparison.projection", lambda: compose(R_mor(a.p), n_a) == ra.p, tag)
        _law(report, "comparison.generic", lambda: compose(R_mor(a.q), n_a) == ra.q, tag)
        if g is not None:
            for t in _sample(rng, a.reindex(g).elements()):
                _law(report, "comparison.pairing",
                     lambda: compose(n_a, ra.pair(R_mor(g), R_mor(t))) == R_mor(a.pair(g, t)), tag)

    # the modality on a family over L Γ
    b = random_family(rng, L(gamma), size)
    rb = dra_type(gamma, b)
    if g is not None:
        lg = L_mor(g)
        b_lg = b.reindex(lg)
        _law(report, "modal.family-stable", lambda: rb.reindex(g) == dra_type(delta, b_lg), tag)
    for t in _sample(rng, b.elements()):
        _law(report, "modal.unbar-bar",
             lambda: dra_unbar(gamma, b, dra_bar(gamma, b, t)) == t, tag)
        if g is not None:
            _law(report, "modal.bar-natural",
                 lambda: compose(dra_bar(gamma, b, t), g) == dra_bar(delta, b_lg, compose(t, lg)), tag)
    for s in _sample(rng, rb.elements()):
        _law(report, "modal.bar-unbar",
             lambda: dra_bar(gamma, b, dra_unbar(gamma, b, s)) == s, tag)
        if g is not None:
            _law(report, "modal.unbar-natural",
                 lambda: compose(dra_unbar(gamma, b, s), lg) == dra_unbar(delta, b_lg, compose(s, g)),
                 tag)


def _sample(rng: random.Random, it: Iterable) -> list:
    items = list(itertools.islice(it, 4 * _ELEMENT_CAP))
    if len(items) > _ELEMENT_CAP:
        items = rng.sample(items, _ELEMENT_CAP)
    return items
