import itertools
import random

import pytest

from fitchmtt import model
from fitchmtt.interpret import Interpretation
from fitchmtt.model import (
    GiraudFamily,
    ModelError,
    Morphism,
    Presheaf,
    Pullback,
    L,
    L_mor,
    R,
    bang,
    bool_family,
    check_laws,
    compose,
    constant,
    dra_bar,
    dra_type,
    dra_unbar,
    eps,
    eta,
    homs,
    identity,
    nu,
    pi_app,
    pi_family,
    pi_lam,
    r_family,
    random_family,
    random_hom,
    random_presheaf,
    terminal,
    transpose_left,
    transpose_right,
    unit_family,
)
from fitchmtt.syntax import BOOL, FALSE, LOCK, TRUE, UNIT, App, Bind, Box, If, Lam, Open, Pi, Shut, Var, ctx


def chain(*sizes, maps=None):
    """Presheaf with stages ``0..k-1`` of the given sizes; default restriction sends everything to 0."""
    stages = [list(range(s)) for s in sizes]
    if maps is None:
        maps = [{x: 0 for x in stages[n]} for n in range(1, len(sizes))]
    return Presheaf(stages, maps)


def brute_homs(src, dst):
    """Natural transformations by filtering every stagewise function."""
    per_stage = [
        [dict(zip(src.stages[n], ys)) for ys in itertools.product(dst.stages[n], repeat=len(src.stages[n]))]
        for n in range(src.depth)
    ]
    out = []
    for comps in itertools.product(*per_stage):
        if all(
            dst.res(comps[n][x], n) == comps[n - 1][src.res(x, n)]
            for n in range(1, src.depth)
            for x in src.stages[n]
        ):
            out.append(comps)
    return out


# presheaves and morphisms


def test_presheaf_rejects_partial_restriction():
    with pytest.raises(ModelError):
        Presheaf([[0], [0, 1]], [{0: 0}])


def test_morphism_rejects_unnatural_map():
    x = chain(2, 2, maps=[{0: 0, 1: 1}])
    y = chain(2, 2, maps=[{0: 0, 1: 0}])
    with pytest.raises(ModelError):
        Morphism(x, y, [{0: 0, 1: 1}, {0: 0, 1: 1}])


def test_homs_matches_brute_force():
    rng = random.Random(7)
    for _ in range(25):
        a, b = random_presheaf(rng, 2, 2), random_presheaf(rng, 2, 2)
        assert len(list(homs(a, b))) == len(brute_homs(a, b))


def test_compose_with_identity():
    x = chain(2, 3)
    f = next(iter(homs(x, x)))
    assert compose(identity(x), f) == f == compose(f, identity(x))


# pullbacks


def test_pullback_along_identity():
    g = chain(2, 2, maps=[{0: 0, 1: 1}])
    u = next(iter(homs(g, g)))
    pb = Pullback(u, identity(g))
    assert pb.obj.sizes() == g.sizes()
    assert compose(pb.p, pb.pair(identity(g), u)) == identity(g)


def test_pullback_of_singletons():
    one = terminal(2)
    two = constant(2, [0, 1])
    u = Morphism(one, two, [{(): 1}, {(): 1}])
    v = Morphism(one, two, [{(): 1}, {(): 1}])
    assert Pullback(u, v).obj.sizes() == (1, 1)


def test_pullback_tabulated():
    gamma = chain(2, 2, maps=[{0: 0, 1: 1}])
    e = chain(2, 2, maps=[{0: 1, 1: 0}])
    u_obj = chain(2, 2, maps=[{0: 0, 1: 1}])
    u = Morphism(gamma, u_obj, [{0: 0, 1: 1}, {0: 0, 1: 1}])
    v = Morphism(e, u_obj, [{0: 1, 1: 0}, {0: 0, 1: 1}])
    pb = Pullback(u, v)
    for n in range(2):
        expected = {(g, x) for g in gamma.stages[n] for x in e.stages[n] if u(n, g) == v(n, x)}
        assert set(pb.obj.stages[n]) == expected
    assert set(pb.obj.stages[1]) == {(0, 0), (1, 1)}


def test_pullback_universal_property():
    # Maps into the pullback are exactly the commuting pairs.
    rng = random.Random(3)
    checked = 0
    while checked < 15:
        gamma, e, u_obj, delta = (random_presheaf(rng, 2, 2) for _ in range(4))
        u, v = random_hom(rng, gamma, u_obj), random_hom(rng, e, u_obj)
        if u is None or v is None:
            continue
        pb = Pullback(u, v)
        squares = [
            (g, a)
            for g in homs(delta, gamma)
            for a in homs(delta, e)
            if compose(u, g) == compose(v, a)
        ]
        assert len(list(homs(delta, pb.obj))) == len(squares)
        for g, a in squares:
            m = pb.pair(g, a)
            assert compose(pb.p, m) == g and compose(pb.q, m) == a
        checked += 1


def test_pair_rejects_non_commuting_square():
    g = constant(1, [0, 1])
    pb = Pullback(Morphism(g, g, [{0: 0, 1: 1}]), Morphism(g, g, [{0: 0, 1: 1}]))
    with pytest.raises(ModelError):
        pb.pair(identity(g), Morphism(g, g, [{0: 1, 1: 0}]))


# the adjunction


def test_L_takes_stage_zero():
    assert L(chain(1, 2, 3)).sizes() == (1, 1, 1)
    assert L(chain(2, 1)).sizes() == (2, 2)


def test_R_counts_compatible_tuples():
    x = chain(2, 3, 2, maps=[{0: 0, 1: 1, 2: 1}, {0: 2, 1: 0}])
    expected = [
        t
        for t in itertools.product(*x.stages)
        if all(x.res(t[k], k) == t[k - 1] for k in range(1, 3))
    ]
    assert set(R(x).stages[0]) == set(expected)
    assert R(x).sizes() == (len(expected),) * 3


def test_hom_bijection_counts():
    rng = random.Random(11)
    for _ in range(20):
        d, g = random_presheaf(rng, 3, 2), random_presheaf(rng, 3, 2)
        left = list(homs(L(d), g))
        assert len(left) == len(list(homs(d, R(g))))
        for f in left:
            assert transpose_left(g, transpose_right(d, f)) == f


def test_triangle_identities():
    x = chain(2, 2, 1, maps=[{0: 0, 1: 1}, {0: 1}])
    assert compose(eps(L(x)), L_mor(eta(x))) == identity(L(x))
    assert compose(model.R_mor(eps(x)), eta(R(x))) == identity(R(x))


# families


def test_reindex_identity_is_strict():
    rng = random.Random(5)
    base = random_presheaf(rng, 2, 2)
    a = random_family(rng, base, 2)
    assert a.reindex(identity(base)).u == a.u


def test_reindex_tabulated():
    gamma = chain(2, 2, maps=[{0: 0, 1: 1}])
    delta = chain(2, 1, maps=[{0: 1}])
    uni = constant(2, ["a", "b"])
    u = Morphism(gamma, uni, [{0: "a", 1: "b"}, {0: "a", 1: "b"}])
    fam = GiraudFamily(u, identity(uni))
    g = Morphism(delta, gamma, [{0: 0, 1: 1}, {0: 1}])
    assert fam.reindex(g).u.comps == ({0: "a", 1: "b"}, {0: "b"})


def test_bool_family_elements():
    for depth in (1, 2, 3):
        fam = bool_family(terminal(depth))
        assert len(list(fam.elements())) == 2


def test_bool_over_two_points():
    fam = bool_family(constant(2, ["p", "q"]))
    assert len(list(fam.elements())) == 2**2


def test_box_bool_fibers_at_depth_three():
    sem = Interpretation(3)
    fam = sem.ty(ctx(), Box(BOOL))
    one = sem.ctx(ctx())
    for n in range(3):
        assert len(fam.fiber(n, one.stages[n][0])) == 2
    assert len(list(fam.elements())) == 2


def test_box_of_unit_is_unit():
    one = terminal(3)
    fam = dra_type(one, unit_family(L(one)))
    assert all(len(fam.fiber(n, one.stages[n][0])) == 1 for n in range(3))


def test_nu_on_identity_presentation():
    uni = constant(2, [0, 1])
    gamma = constant(2, ["g"])
    fam = GiraudFamily(Morphism(gamma, uni, [{"g": 1}, {"g": 1}]), identity(uni))
    inv = nu(fam)
    ra = r_family(fam)
    cmp = ra.pair(model.R_mor(fam.p), model.R_mor(fam.q))
    assert compose(inv, cmp) == identity(R(fam.obj))
    assert compose(cmp, inv) == identity(ra.obj)


def test_nu_on_random_families():
    rng = random.Random(9)
    for _ in range(20):
        base = random_presheaf(rng, 3, 2)
        fam = random_family(rng, base, 2)
        ra = r_family(fam)
        cmp = ra.pair(model.R_mor(fam.p), model.R_mor(fam.q))
        assert compose(nu(fam), cmp) == identity(R(fam.obj))


def test_bar_and_unbar_are_inverse():
    rng = random.Random(13)
    for _ in range(20):
        gamma = random_presheaf(rng, 3, 2)
        a = random_family(rng, L(gamma), 2)
        for t in itertools.islice(a.elements(), 8):
            b = dra_bar(gamma, a, t)
            assert dra_type(gamma, a).is_element(b)
            assert dra_unbar(gamma, a, b) == t
        for b in itertools.islice(dra_type(gamma, a).elements(), 8):
            assert dra_bar(gamma, a, dra_unbar(gamma, a, b)) == b


# dependent products


def test_pi_bool_to_bool():
    one = terminal(2)
    a = bool_family(one)
    b = bool_family(a.obj)
    pi = pi_family(one, a, b)
    assert [len(pi.fiber(n, one.stages[n][0])) for n in range(2)] == [4, 4]
    assert len(list(pi.elements())) == 4


def test_pi_over_empty_domain():
    one = terminal(2)
    empty = Presheaf([[], []], [{}])
    a = GiraudFamily(bang(one), bang(empty))
    b = bool_family(a.obj)
    pi = pi_family(one, a, b)
    assert [len(pi.fiber(n, ())) for n in range(2)] == [1, 1]


def test_pi_into_singleton():
    one = terminal(3)
    a = bool_family(one)
    pi = pi_family(one, a, unit_family(a.obj))
    assert [len(pi.fiber(n, ())) for n in range(3)] == [1, 1, 1]


def test_pi_beta_and_eta_in_the_model():
    one = terminal(2)
    a = bool_family(one)
    b = bool_family(a.obj)
    pi = pi_family(one, a, b)
    for f in pi.elements():
        for x in a.elements():
            out = pi_app(one, a, b, f, x)
            assert b.reindex(a.pair(identity(one), x)).is_element(out)
    for body in b.elements():
        lam = pi_lam(one, a, b, body)
        assert pi.is_element(lam)
        for x in a.elements():
            sub = a.pair(identity(one), x)
            assert pi_app(one, a, b, lam, x) == compose(body, sub)


def test_pi_strict_reindexing():
    rng = random.Random(21)
    done = 0
    while done < 10:
        gamma = random_presheaf(rng, 2, 2)
        delta = random_presheaf(rng, 2, 2)
        g = random_hom(rng, delta, gamma)
        if g is None:
            continue
        a = random_family(rng, gamma, 2)
        b = random_family(rng, a.obj, 2)
        a2 = a.reindex(g)
        lift = a.pair(compose(g, a2.p), a2.q)
        assert pi_family(delta, a2, b.reindex(lift)) == pi_family(gamma, a, b).reindex(g)
        done += 1


# laws


def test_laws_degenerate_chain():
    rep = check_laws(1, 1, 20, 0)
    assert rep.ok
    assert all(r.instances > 0 for r in rep.laws.values())


def test_laws_depth_two():
    rep = check_laws(2, 2, 200, 42)
    assert rep.violations == 0
    assert len(rep.laws) >= 8
    assert all(r.instances > 0 for r in rep.laws.values())


def test_laws_reproducible():
    a = check_laws(2, 2, 30, 1)
    b = check_laws(2, 2, 30, 1)
    assert {k: v.instances for k, v in a.laws.items()} == {k: v.instances for k, v in b.laws.items()}


def test_laws_argument_validation():
    with pytest.raises(ValueError):
        check_laws(0, 2, 1, 0)


# the interpretation


def test_open_shut_denotes_like_its_reduct():
    sem = Interpretation(3)
    g = ctx(Bind("x", Box(BOOL)))
    assert sem.tm(ctx(), If("z", BOOL, TRUE, TRUE, FALSE), BOOL) == sem.tm(ctx(), TRUE, BOOL)
    assert sem.tm(g, Var("x"), Box(BOOL)) == sem.tm(g, Shut(Open(Var("x"))), Box(BOOL))
    assert sem.tm(ctx(), App(Lam("b", Var("b"), BOOL), TRUE), BOOL) == sem.tm(ctx(), TRUE, BOOL)


def test_open_of_shut_under_lock():
    sem = Interpretation(3)
    g = ctx(LOCK)
    assert sem.tm(g, Open(Shut(TRUE)), BOOL) == sem.tm(g, TRUE, BOOL)


def test_true_and_false_differ():
    sem = Interpretation(3)
    assert sem.tm(ctx(), TRUE, BOOL) != sem.tm(ctx(), FALSE, BOOL)


WEAKEN_CASES = [
    # gamma, (x, a), rest, term, type
    (ctx(Bind("b", BOOL)), ("w", Box(BOOL)), ctx(), Var("b"), BOOL),
    (ctx(Bind("b", Box(BOOL))), ("w", BOOL), ctx(LOCK), Open(Var("b")), BOOL),
    (ctx(), ("w", BOOL), ctx(Bind("c", BOOL), LOCK, Bind("d", UNIT)), Var("d"), UNIT),
    (ctx(Bind("f", Pi("_", BOOL, BOOL))), ("w", UNIT), ctx(Bind("c", BOOL)), App(Var("f"), Var("c")), BOOL),
]


@pytest.mark.parametrize("gamma, xa, rest, t, a", WEAKEN_CASES)
def test_weakening_reindexes_denotations(gamma, xa, rest, t, a):
    sem = Interpretation(2)
    x, ax = xa
    wk = sem.weakening(gamma, x, ax, rest)
    small, big = gamma + rest, gamma.bind(x, ax) + rest
    assert sem.ty(big, a) == sem.ty(small, a).reindex(wk)
    assert sem.tm(big, t, a) == compose(sem.tm(small, t, a), wk)


def test_exchange_reindexes_denotations():
    sem = Interpretation(2)
    straight = ctx(Bind("x", Box(BOOL)), Bind("y", BOOL))
    swapped = ctx(Bind("y", BOOL), Bind("x", Box(BOOL)))
    ex = sem.exchange(ctx(), "x", Box(BOOL), "y", BOOL, ctx())
    t = If("z", BOOL, Var("y"), FALSE, TRUE)
    assert sem.tm(swapped, t, BOOL) == compose(sem.tm(straight, t, BOOL), ex)

    rest = ctx(LOCK, Bind("c", BOOL))
    ex = sem.exchange(ctx(), "x", Box(BOOL), "y", BOOL, rest)
    t = If("z", BOOL, Var("c"), Open(Var("x")), FALSE)
    assert sem.tm(swapped + rest, t, BOOL) == compose(sem.tm(straight + rest, t, BOOL), ex)


@pytest.mark.parametrize("u", [TRUE, FALSE])
def test_substitution_reindexes_denotations(u):
    sem = Interpretation(2)
    gamma = ctx()
    rest = ctx(Bind("c", Box(BOOL)), LOCK)
    sub = sem.substitution(gamma, "x", BOOL, rest, u)
    t = If("z", BOOL, Open(Var("c")), TRUE, FALSE)
    big = ctx(Bind("x", BOOL)) + rest
    assert sem.tm(rest, t, BOOL) == compose(sem.tm(big, t, BOOL), sub)
    s = If("z", BOOL, Var("x"), TRUE, FALSE)
    g1 = ctx(Bind("x", BOOL))
    sub0 = sem.substitution(gamma, "x", BOOL, ctx(), u)
    assert compose(sem.tm(g1, s, BOOL), sub0) == sem.tm(ctx(), If("z", BOOL, u, TRUE, FALSE), BOOL)
