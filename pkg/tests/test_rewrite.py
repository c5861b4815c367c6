import random

import pytest

from mucalc.gen import TermGen, axiom_instance, default_signature
from mucalc.rewrite import AXIOMS, FuelExhausted, default_fuel, equiv, normalize
from mucalc.syntax.ast import TConst, Var
from mucalc.syntax.parser import parse_term
from mucalc.syntax.subst import alpha_eq
from mucalc.typecheck import infer

P, Q = TConst("P"), TConst("Q")


def nf(text, delta=None, **kw):
    return normalize(parse_term(text), delta=delta or {}, **kw)


def test_beta_and_projection():
    m, trace = nf("pi1 <(\\x:P. x) y, z>")
    assert m == Var("y")
    assert {s.rule for s in trace} >= {"proj", "beta"}


def test_rename_and_mu_eta():
    m, _ = nf("mu a:P. [a] mu b:P. [a] y")
    assert m == Var("y")


def test_eta_mode():
    m, _ = nf("\\x:P. f x")
    assert alpha_eq(m, parse_term("\\x:P. f x"))
    m, _ = nf("\\x:P. f x", eta=True)
    assert m == Var("f")


def test_fuel_exhaustion():
    with pytest.raises(FuelExhausted):
        nf("pi1 <pi1 <pi1 <x, x>, x>, x>", fuel=1)


def test_fuel_from_environment(monkeypatch):
    monkeypatch.setenv("MUCALC_FUEL", "123")
    assert default_fuel() == 123


def test_normal_forms_keep_types():
    sig = default_signature()
    rng = random.Random(7)
    gen = TermGen(rng, sig)
    for ax in AXIOMS:
        l, _ = axiom_instance(ax, rng, gen, size=6)
        ty = infer({}, l, {}, sig)
        assert infer({}, normalize(l, sig=sig)[0], {}, sig) == ty


@pytest.mark.parametrize("ax", AXIOMS)
def test_axiom_instances_are_equal(ax):
    sig = default_signature()
    rng = random.Random(hash(ax) % 1000)
    gen = TermGen(rng, sig)
    for _ in range(5):
        l, r = axiom_instance(ax, rng, gen, size=6)
        assert equiv(l, r, sig).equal


def test_distinct_projections():
    m, n = parse_term("\\x:P. \\y:P. x"), parse_term("\\x:P. \\y:P. y")
    assert equiv(m, n).distinct


def test_top_collapses():
    v = equiv(Var("u"), parse_term("unit"), gamma={"u": infer({}, parse_term("unit"), {})})
    assert v.equal


def test_equiv_rejects_type_mismatch():
    with pytest.raises(ValueError):
        equiv(Var("x"), Var("y"), gamma={"x": P, "y": Q})
