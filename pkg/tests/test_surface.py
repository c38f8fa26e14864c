import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from fitchmtt.surface import ParseError, annotate, elaborate, parse, parse_expr, pretty, pretty_decl
from fitchmtt.syntax import BOOL, App, Box, Code, El, Lam, Open, Pi, Shut, Var, alpha_eq

from strategies import exprs

K_SRC = r"def k : Box (A -> B) -> Box A -> Box B := \f. \x. shut ((open f) (open x));"


def test_parse_k_body():
    d = parse(K_SRC)["k"]
    assert d.body == Lam("f", Lam("x", Shut(App(Open(Var("f")), Open(Var("x"))))))
    assert d.annotation == Pi("_", Box(Pi("_", Var("A"), Var("B"))), Pi("_", Box(Var("A")), Box(Var("B"))))


def test_parse_identity():
    d = parse(r"def i : Bool -> Bool := \x. x;")["i"]
    assert d.body == Lam("x", Var("x"))
    assert d.annotation == Pi("_", BOOL, BOOL)


def test_missing_annotation_is_diagnosed():
    with pytest.raises(ParseError) as info:
        parse("def bad := ;")
    diag = info.value.diagnostic
    assert diag.line == 1
    assert diag.column > 1
    assert diag.code == "PARSE"


def test_diagnostic_position_on_later_line():
    with pytest.raises(ParseError) as info:
        parse("def a : Bool := true;\ndef b : Bool := ;")
    assert info.value.diagnostic.line == 2


def test_duplicate_definition_rejected():
    with pytest.raises(ParseError):
        parse("def a : Bool := true; def a : Bool := false;")


def test_trailing_input_rejected():
    with pytest.raises(ParseError):
        parse_expr("true )")


@pytest.mark.parametrize(
    "expr, text",
    [
        (Shut(Open(Var("x"))), "shut open x"),
        (Pi("x", BOOL, BOOL), "Bool -> Bool"),
        (Code(Box(El(Open(Var("x"))))), "code (Box (El (open x)))"),
        (App(App(Var("f"), Var("x")), Var("y")), "f x y"),
        (App(Var("f"), App(Var("x"), Var("y"))), "f (x y)"),
        (Pi("_", Pi("_", BOOL, BOOL), BOOL), "(Bool -> Bool) -> Bool"),
        (Pi("x", BOOL, El(Var("x"))), "fun (x : Bool) -> El x"),
        (Lam("x", Var("x"), BOOL), r"\(x : Bool). x"),
    ],
)
def test_pretty_examples(expr, text):
    assert pretty(expr) == text
    assert alpha_eq(parse_expr(text), expr)


def test_comments_and_whitespace():
    src = parse("-- a comment\ndef t : Bool\n  := true; -- trailing\n")
    assert src.names() == ["t"]


def test_pretty_decl_round_trips():
    d = parse(K_SRC)["k"]
    again = parse(pretty_decl(d))["k"]
    assert alpha_eq(again.body, d.body)
    assert alpha_eq(again.annotation, d.annotation)


@settings(max_examples=600, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(exprs(6))
def test_print_then_parse_is_alpha_identity(e):
    assert alpha_eq(parse_expr(pretty(e)), e)


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet=" \\.():;->=xyzUtrueopenshut0123", max_size=40))
def test_parser_is_total(text):
    # Either an expression or a ParseError, never anything else.
    try:
        parse_expr(text)
    except ParseError:
        pass


def test_deep_nesting_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_expr("(" * 5000 + "true" + ")" * 5000)


def test_annotate_pushes_domains():
    body = Lam("x", Lam("y", Var("x")))
    ty = Pi("_", BOOL, Pi("_", BOOL, BOOL))
    assert annotate(body, ty) == Lam("x", Lam("y", Var("x"), BOOL), BOOL)


def test_elaborate_inlines_earlier_declarations():
    src = parse(r"def i : Bool -> Bool := \x. x; def t : Bool := i true;")
    t = elaborate(src)[1]
    assert isinstance(t.body, App)
    assert t.body.fn == Lam("x", Var("x"), BOOL)
