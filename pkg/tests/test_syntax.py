import pytest

from mucalc.syntax.ast import (
    BOT, HOLE, TOP, App, Arrow, Const, Disj, Lam, Mu, Named, Pair, Proj, TConst, Var, neg,
)
from mucalc.syntax.names import free_cvars, free_vars, fresh
from mucalc.syntax.parser import ParseError, parse_script, parse_term, parse_type
from mucalc.syntax.printer import pretty, pretty_type
from mucalc.syntax.subst import alpha_eq, struct_subst, subst_term

P, Q = TConst("P"), TConst("Q")


def test_parse_types():
    assert parse_type("P -> Q -> P") == Arrow(P, Arrow(Q, P))
    assert parse_type("~P") == neg(P) == Arrow(P, BOT)
    assert parse_type("P * Q \\/ Top") == Disj(parse_type("P * Q"), TOP)


def test_parse_terms():
    m = parse_term("\\x:P. mu a:P. [a] x")
    assert m == Lam("x", P, Mu("a", P, Named("a", Var("x"))))
    assert parse_term("pi1 <x, y>") == Proj(1, Pair(Var("x"), Var("y")))
    assert parse_term("f x", consts=["f"]) == App(Const("f"), Var("x"))


@pytest.mark.parametrize("text", [
    "\\x:P. x",
    "\\f:P -> Q. \\x:P. f x",
    "mu (a1:P, a2:Q). [a1, a2] m",
    "<pi1 m, pi2 m>",
    "mu a:P * Q. [a] <x, y>",
])
def test_print_parse_roundtrip(text):
    m = parse_term(text)
    assert alpha_eq(parse_term(pretty(m)), m)


def test_type_printer_roundtrip():
    for text in ["(P -> Q) -> P", "~~P", "P \\/ Q * Top", "Bot"]:
        t = parse_type(text)
        assert parse_type(pretty_type(t)) == t


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_term("\\x. x")
    with pytest.raises(ParseError):
        parse_type("P ->")


def test_script_declarations():
    s = parse_script("nu S(X) = Bot * X; const c : P; def i = \\x:P. x; assert i c == c;")
    assert [type(d).__name__ for d in s.decls] == [
        "NuDeclaration", "ConstDecl", "Definition", "Assertion"]
    assert s.decls[-1].source == "i c == c"


def test_free_names():
    m = parse_term("\\x:P. mu a:P. [b] y")
    assert free_vars(m) == {"y"}
    assert free_cvars(m) == {"b"}


def test_fresh_avoids():
    assert fresh("x", {"x", "x1"}) not in {"x", "x1"}


def test_substitution_avoids_capture():
    m = parse_term("\\y:P. x")
    out = subst_term(m, "x", Var("y"))
    assert isinstance(out, Lam) and out.var != "y" and out.body == Var("y")


def test_alpha_eq():
    assert alpha_eq(parse_term("\\x:P. mu a:P. [a] x"), parse_term("\\z:P. mu b:P. [b] z"))
    assert not alpha_eq(parse_term("\\x:P. \\y:P. x"), parse_term("\\x:P. \\y:P. y"))


def test_structural_substitution():
    m = parse_term("mu a:P * Q. [a] x")
    ctx = Named("b", Proj(1, HOLE))
    out = struct_subst(m.body, "a", ctx)
    assert out == Named("b", Proj(1, Var("x")))


def test_structural_substitution_renaming():
    m = parse_term("[a] mu c:P. [a] x")
    assert struct_subst(m, "a", Named("b", HOLE)) == parse_term("[b] mu c:P. [b] x")
