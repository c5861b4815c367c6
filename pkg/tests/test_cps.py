import pytest

from mucalc.cps import (
    ONE, R, ZERO, Fun, Plus, Times, cps_equiv, cps_term, cps_type, describe, oracle, show_ttype,
    ttype_of,
)
from mucalc.datatypes import nat_encoding
from mucalc.syntax.ast import BOT, TOP, App, Arrow, Const, Disj, Prod, Signature, TConst, Var
from mucalc.syntax.parser import parse_term

P, Q = TConst("P"), TConst("Q")


def test_type_table():
    assert cps_type(TOP) == ZERO
    assert cps_type(BOT) == ONE
    assert isinstance(cps_type(Prod(P, Q)), Plus)
    assert isinstance(cps_type(Disj(P, Q)), Times)
    arrow = cps_type(Arrow(P, Q))
    assert isinstance(arrow, Times) and arrow.left == Fun(cps_type(P), R)


def test_type_printing():
    assert show_ttype(cps_type(Arrow(P, Q))) == "(P -> R) * Q"
    assert show_ttype(cps_type(Arrow(P, Q)), symbols=True) == "(P→R)×Q"
    assert show_ttype(cps_type(TOP)) == "Empty"


def test_streams_become_an_inductive_type():
    enc = nat_encoding()
    assert show_ttype(cps_type(enc.nu.ty, enc.sig), symbols=True) == "μX.⊤+X"


def test_term_translation_is_typed():
    m = parse_term("\\x:P. x")
    t, ty = cps_term({}, m, {}, Signature())
    assert ty == Arrow(P, P)
    assert ttype_of(t, {}) == Fun(cps_type(ty), R)
    _, _, nf = describe(m)
    assert "pi1" in nf


@pytest.mark.parametrize("left, right, outcome", [
    ("pi1 <x, y>", "x", "equal"),
    ("mu (a1:P, a2:Q). [a1, a2] m", "m", "equal"),
    ("<x, y>", "<y, x>", "distinct"),
])
def test_oracle(left, right, outcome):
    gamma = {"x": P, "y": P, "m": Disj(P, Q)}
    assert cps_equiv(parse_term(left), parse_term(right), gamma=gamma).outcome == outcome


def test_oracle_on_coinductive_terms():
    enc = nat_encoding()
    sig = enc.sig
    n = Var("n")
    suc = enc.constructors["suc"]
    m = App(suc, App(suc, n))
    v = oracle(m, m, sig, {"n": enc.carrier}, {})
    assert v.outcome in ("equal", "unknown")
    assert v.outcome != "distinct"
