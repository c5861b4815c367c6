import pytest

from mucalc.datatypes import (
    corrupt, list_encoding, list_pair, nat_encoding, nat_prime_encoding, shape_depth,
    primitive_pairs, tree_encoding, tree_pair, tree_shapes, validate_pair,
)
from mucalc.demo import demo_list, demo_nat, demo_tree, iterate
from mucalc.focality import certify_focal
from mucalc.rewrite import equiv
from mucalc.syntax.ast import TOP, UNIT, App, Arrow, Const, TConst
from mucalc.typecheck import MuTypeError, infer

P, B = TConst("P"), TConst("B")


@pytest.mark.parametrize("pair", primitive_pairs(B), ids=lambda p: p.name)
def test_table_rows_are_isomorphisms(pair):
    assert validate_pair(pair, samples=6).equal


@pytest.mark.parametrize("pair", [list_pair(B), tree_pair(B)], ids=["list", "tree"])
def test_composite_pairs(pair):
    assert validate_pair(pair, samples=6).equal
    assert certify_focal(pair.to_at(P)) is not None


@pytest.mark.parametrize("row", range(5))
def test_corrupted_witness_is_rejected(row):
    pair = primitive_pairs(B)[row]
    bad = corrupt(pair)
    if bad.witness_to == pair.witness_to:
        pytest.skip("row has no named pair to corrupt")
    try:
        verdict = validate_pair(bad, samples=6)
    except MuTypeError:
        return  # swapping differently-typed continuations is caught by the type checker
    assert verdict.distinct


def test_nat_constructors_typecheck():
    enc = nat_encoding()
    zero, suc = enc.constructors["zero"], enc.constructors["suc"]
    assert infer({}, zero, {}, enc.sig) == Arrow(TOP, enc.carrier)
    assert infer({}, suc, {}, enc.sig) == Arrow(enc.carrier, enc.carrier)
    assert infer({}, enc.numeral(3), {}, enc.sig) == enc.carrier


def test_nat_fold_small():
    enc = nat_encoding()
    enc.sig.consts.update(g=Arrow(TOP, P), f=Arrow(P, P))
    fold = enc.fold_gf(Const("g"), Const("f"), P)
    for n in range(4):
        target = iterate(Const("f"), App(Const("g"), UNIT), n)
        assert equiv(App(fold, enc.numeral(n)), target, enc.sig).equal
    assert not equiv(App(fold, enc.numeral(2)), App(Const("g"), UNIT), enc.sig).equal


def test_nat_prime_numerals():
    enc = nat_prime_encoding()
    assert infer({}, enc.numeral(2), {}, enc.sig) == enc.carrier


def test_list_and_tree_literals_typecheck():
    lists = list_encoding()
    lists.sig.consts["b0"] = B
    assert infer({}, lists.literal([Const("b0")] * 3), {}, lists.sig) == lists.carrier
    trees = tree_encoding()
    trees.sig.consts["l"] = B
    lit = trees.literal(((Const("l"), Const("l")), Const("l")))
    assert infer({}, lit, {}, trees.sig) == trees.carrier


def test_tree_shapes_count():
    letters = ["a", "b"]
    assert [len(tree_shapes(d, letters)) for d in range(1, 5)] == [2, 6, 38, 1446]
    assert max(shape_depth(s) for s in tree_shapes(3, letters)) == 3


def test_demos_pass():
    for report in (demo_nat(4), demo_list(3), demo_tree(2)):
        assert report.summary.failed == 0 and report.summary.total > 0
