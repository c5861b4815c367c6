import pytest

from mucalc.syntax.ast import BOT, TOP, UNIT, Arrow, Disj, NuDecl, NuRef, Prod, Signature, TConst, TVar
from mucalc.syntax.parser import parse_term, parse_type
from mucalc.typecheck import MuTypeError, check, check_type_wf, infer

P, Q = TConst("P"), TConst("Q")


def t(text, gamma=None, delta=None, sig=None):
    return infer(gamma or {}, parse_term(text, consts=list((sig or Signature()).consts)),
                 delta or {}, sig)


def test_unit_and_pairs():
    assert infer({}, UNIT, {}) == TOP
    assert t("<x, y>", {"x": P, "y": Q}) == Prod(P, Q)
    assert t("pi2 <x, y>", {"x": P, "y": Q}) == Q


def test_lambda_and_application():
    assert t("\\x:P. x") == Arrow(P, P)
    assert t("f x", {"f": Arrow(P, Q), "x": P}) == Q


def test_mu_and_naming():
    assert t("mu a:P. [a] x", {"x": P}) == P
    # a named term has type Bot
    assert t("[a] x", {"x": P}, {"a": P}) == BOT
    assert t("mu (a1:P, a2:Q). [a2] y", {"y": Q}) == Disj(P, Q)


def test_exchange():
    g1, g2 = {"x": P, "y": Q}, {"y": Q, "x": P}
    assert t("<y, x>", g1) == t("<y, x>", g2)


@pytest.mark.parametrize("text, gamma, kind", [
    ("x", {}, "unbound"),
    ("x y", {"x": P, "y": P}, "not-a-function"),
    ("pi1 x", {"x": P}, "not-a-product"),
    ("f x", {"f": Arrow(P, Q), "x": Q}, "mismatch"),
    ("mu a:P. x", {"x": P}, "mismatch"),
])
def test_errors(text, gamma, kind):
    with pytest.raises(MuTypeError) as e:
        t(text, gamma)
    assert e.value.kind == kind


def test_check_mode():
    check({}, parse_term("\\x:P. x"), Arrow(P, P), {})
    with pytest.raises(MuTypeError):
        check({}, parse_term("\\x:P. x"), Arrow(P, Q), {})


def test_coinductive_types():
    sig = Signature()
    sig.nus["S"] = NuDecl("S", "X", Prod(BOT, TVar("X")))
    s = NuRef("S")
    assert infer({"s": s}, parse_term("out{S} s", nus=["S"]), {}, sig) == Prod(BOT, s)
    m = parse_term("unfold{S}(\\w:P. <w0, w>)", nus=["S"])
    assert infer({"w0": BOT}, m, {}, sig) == Arrow(P, s)


def test_undeclared_coinductive_type():
    with pytest.raises(MuTypeError) as e:
        check_type_wf(parse_type("S", nus=["S"]), Signature())
    assert e.value.kind == "bad-nu"
