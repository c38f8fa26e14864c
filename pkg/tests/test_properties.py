import pytest

from fitchmtt.interpret import soundness_check
from fitchmtt.kernel import HasType, Kernel, TypeCheckError
from fitchmtt.properties import (
    EQUATIONS,
    STRUCTURAL,
    corpus_files,
    derived_judgments,
    elaborate,
    equality_instances,
    equality_suite,
    expected_code,
    inhabitants,
    load,
    structural_suite,
)
from fitchmtt.surface import parse
from fitchmtt.syntax import BOOL, LOCK, Bind, Box, Pi, Univ, ctx

ACCEPT = corpus_files("accept")
REJECT = corpus_files("reject")


@pytest.mark.parametrize("path", ACCEPT, ids=lambda p: p.stem)
def test_accept_corpus_checks(path):
    k = Kernel()
    for d in elaborate(load(path)):
        k.check_decl(d.annotation, d.body)


@pytest.mark.parametrize("path", REJECT, ids=lambda p: p.stem)
def test_reject_corpus_codes(path):
    code = expected_code(path)
    assert code is not None
    (d,) = elaborate(load(path))
    with pytest.raises(TypeCheckError) as info:
        Kernel().check_decl(d.annotation, d.body)
    assert info.value.code == code


def test_corpus_sizes():
    n_accept = sum(len(load(p).decls) for p in ACCEPT)
    assert n_accept >= 25
    assert len(REJECT) >= 10


def test_inhabitants_respect_locks():
    k = Kernel()
    g = ctx(Bind("b", BOOL), LOCK)
    out = inhabitants(k, g, BOOL)
    assert all(k.holds(HasType(g, t, BOOL)) for t in out)
    assert all(str(t) != "b" for t in out)
    for t in inhabitants(k, ctx(), Pi("_", BOOL, Box(BOOL))):
        assert k.holds(HasType(ctx(), t, Pi("_", BOOL, Box(BOOL))))
    assert inhabitants(k, ctx(), Univ(1))


def test_structural_suite(corpus_decls):
    res = structural_suite(corpus_decls)
    assert set(res) == set(STRUCTURAL)
    for r in res.values():
        assert r.instances > 0, r.name
        assert r.violations == 0, (r.name, r.examples)
    assert sum(r.instances for r in res.values()) >= 200


def test_equality_suite(corpus_decls):
    res = equality_suite(corpus_decls)
    assert set(res) == set(EQUATIONS)
    for r in res.values():
        assert r.instances >= 30, r.name
        assert r.violations == 0, (r.name, r.examples)
        assert r.fuel_exhausted == 0


def test_equality_suite_catches_a_false_equation(corpus_decls):
    # An equation outside the theory must register as a violation.
    from fitchmtt.kernel import TermEq
    from fitchmtt.syntax import FALSE, TRUE

    k = Kernel()
    assert not k.holds(TermEq(ctx(), TRUE, FALSE, BOOL))
    inst = equality_instances(corpus_decls, k)
    assert all(k.holds(eq) for eq in inst["beta-box"][:10])


def test_traces_are_nonempty(corpus_decls):
    assert len(derived_judgments(corpus_decls)) >= 100


@pytest.mark.parametrize("path", ACCEPT, ids=lambda p: p.stem)
def test_soundness_per_file(path):
    rep = soundness_check(load(path), depth=3)
    assert rep.ok, rep.violations


def test_soundness_against_universe_free_code():
    src = parse(
        r"""
        def a : Box Bool := shut (open (shut true));
        def b : Box Bool := shut true;
        def c : Box Bool := shut false;
        def d : Box Bool -> Box Bool := \x. shut (open x);
        def e : Box Bool -> Box Bool := \x. x;
        """
    )
    rep = soundness_check(src, depth=3)
    assert rep.ok
    names = {(e.kind, e.name) for e in rep.entries}
    assert ("equal", "a ~ b") in names
    assert ("distinct", "a ~ c") in names
    assert ("equal", "d ~ e") in names
    assert rep.count("defined") == 5


def test_soundness_skips_universes():
    rep = soundness_check(parse("def t : U 1 := code (U 0);"), depth=2)
    assert [e.kind for e in rep.entries] == ["fragment"]
    assert rep.ok


def test_soundness_reports_kernel_errors():
    rep = soundness_check(parse("def t : Bool := shut true;"), depth=2)
    assert not rep.ok
    assert rep.violations[0].kind == "kernel"
