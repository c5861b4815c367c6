from mucalc import focality
from mucalc.datatypes import not_map
from mucalc.focality import (
    case_beta_sides, case_eta_sides, certify_focal, check_central, is_focal_context, replay,
)
from mucalc.rewrite import equiv
from mucalc.syntax.ast import HOLE, Arrow, Const, Proj, Signature, TConst, oplus, TOP
from mucalc.syntax.parser import parse_term

P, Q, R = TConst("P"), TConst("Q"), TConst("R")


def sig(**consts):
    return Signature(dict(consts))


def test_focal_contexts():
    assert is_focal_context(HOLE)
    assert is_focal_context(Proj(1, HOLE))
    assert not is_focal_context(parse_term("\\x:P. x"))


def test_identity_and_not_are_certified():
    cert = certify_focal(parse_term("\\x:P. x"))
    assert cert is not None and replay(cert)
    h = not_map(Const("h"), Q, Q)
    assert certify_focal(h, sig(h=Arrow(Q, Q))).rule == "not-of-F"


def test_stored_function_is_not_certified():
    s = sig(k=Arrow(P, P))
    assert certify_focal(Const("k"), s) is None


def test_sampled_focality():
    s = sig(k=Arrow(P, P))
    assert focality.test_focal(parse_term("\\x:P. x"), 10, s).equal
    assert focality.test_focal(Const("k"), 10, s).distinct


def test_constant_function_is_not_central():
    s = sig(c=P, d=Q)
    const_c = parse_term("\\x:Q. c", consts=["c"])
    const_d = parse_term("\\y:P. d", consts=["d"])
    assert not check_central(const_c, const_d, 5, s).equal
    ident = parse_term("\\x:P. x")
    assert check_central(ident, ident, 5, s).equal


def test_case_beta():
    s = sig(g1=Arrow(Q, P), g2=Arrow(R, P), m=Q)
    lhs, rhs = case_beta_sides(Const("g1"), Const("g2"), 1, Const("m"), s)
    assert equiv(lhs, rhs, s).equal


def test_case_eta_needs_focality():
    s = sig(fk=Arrow(oplus(TOP, TOP), P))
    lhs, rhs = case_eta_sides(Const("fk"), s)
    assert equiv(lhs, rhs, s).distinct
