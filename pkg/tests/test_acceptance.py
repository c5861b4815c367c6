"""Acceptance criteria, one test each, at their stated sizes and time limits.

Run with pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly: ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import time
from functools import lru_cache

import pytest

from mucalc.cps import cps_equiv, cps_type, show_ttype
from mucalc.datatypes import (
    case_fold, list_pair, nat_encoding, nat_prime_encoding, not_map, primitive_pairs, tree_pair,
    validate_pair,
)
from mucalc.demo import demo_tree, iterate
from mucalc.focality import case_beta_sides, case_eta_sides, certify_focal
from mucalc.gen import TermGen, axiom_instance, default_signature, random_type
from mucalc.rewrite import AXIOMS, equiv
from mucalc.script import BUNDLED, Options, run_script
from mucalc.syntax.ast import (
    BOT, TOP, UNIT, App, Arrow, Const, Disj, NuDecl, NuRef, Prod, Signature, TConst, TVar, Var,
    neg, oplus,
)
from mucalc.syntax.elaborate import case_term

SEED = 2024
RESULTS: dict[int, tuple[bool, str]] = {}

P, Q, B = TConst("P"), TConst("Q"), TConst("B")


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    assert ok, detail


@lru_cache(maxsize=None)
def axiom_instances(seed: int = SEED, per_axiom: int = 50):
    rng = random.Random(seed)
    gen = TermGen(rng, default_signature())
    return [(ax, *axiom_instance(ax, rng, gen, size=8)) for ax in AXIOMS for _ in range(per_axiom)]


def random_pairs(seed: int, count: int):
    rng = random.Random(seed)
    gen = TermGen(rng, default_signature())
    out = []
    while len(out) < count:
        t = random_type(rng, 2)
        try:
            out.append((gen.term(t, size=6), gen.term(t, size=6)))
        except ValueError:
            continue
    return out


# ---------------------------------------------------------------- criteria


def criterion_1() -> tuple[bool, str]:
    sig = default_signature()
    t0 = time.perf_counter()
    bad = [ax for ax, l, r in axiom_instances() if equiv(l, r, sig).outcome != "equal"]
    dt = time.perf_counter() - t0
    n = len(axiom_instances())
    return not bad and dt < 60, f"{n - len(bad)}/{n} instances equal over 13 axioms in {dt:.1f}s"


def criterion_2() -> tuple[bool, str]:
    sig = default_signature()
    pairs = [(l, r) for _, l, r in axiom_instances()] + random_pairs(SEED, 200)
    t0 = time.perf_counter()
    clash, tally = 0, {}
    for l, r in pairs:
        v, o = equiv(l, r, sig).outcome, cps_equiv(l, r, sig).outcome
        tally[(v, o)] = tally.get((v, o), 0) + 1
        clash += {v, o} == {"equal", "distinct"}
    dt = time.perf_counter() - t0
    shown = ", ".join(f"{v}/{o}: {k}" for (v, o), k in sorted(tally.items()))
    return (clash == 0 and len(pairs) >= 500 and dt < 120,
            f"{len(pairs)} pairs, {clash} contradictions ({shown}) in {dt:.1f}s")


def criterion_3() -> tuple[bool, str]:
    enc = nat_encoding()
    sig = enc.sig
    sig.consts.update(g=Arrow(TOP, P), f=Arrow(P, P))
    g, f = Const("g"), Const("f")
    fold = enc.fold_gf(g, f, P)
    t0 = time.perf_counter()
    folds = [equiv(App(fold, enc.numeral(n)), iterate(f, App(g, UNIT), n), sig).outcome
             for n in range(21)]
    heads = [equiv(enc.numeral(n), enc.head_tail(n), sig).outcome for n in range(21)]
    dt = time.perf_counter() - t0
    ok = set(folds) == {"equal"} and set(heads) == {"equal"} and dt < 30
    return ok, (f"fold: {folds.count('equal')}/21 equal, head.tail^n: "
                f"{heads.count('equal')}/21 equal in {dt:.1f}s")


def criterion_4() -> tuple[bool, str]:
    a = neg(Q)
    enc = nat_encoding()
    sig = enc.sig
    sig.consts.update(g=Arrow(TOP, a), h=Arrow(Q, Q), k=Arrow(a, a))
    suc = enc.constructors["suc"]
    focal_f, stored = not_map(Const("h"), Q, Q), Const("k")
    t0 = time.perf_counter()
    certified = certify_focal(focal_f, sig) is not None
    fold = enc.fold_gf(Const("g"), focal_f, a)
    lits = [equiv(App(fold, App(suc, enc.numeral(n))), App(focal_f, App(fold, enc.numeral(n))),
                  sig).outcome for n in range(20)]
    n = Var("n")
    gamma = {"n": enc.carrier}
    focal_var = equiv(App(fold, App(suc, n)), App(focal_f, App(fold, n)), sig, gamma).outcome
    kfold = enc.fold_gf(Const("g"), stored, a)
    nonfocal = equiv(App(kfold, App(suc, n)), App(stored, App(kfold, n)), sig, gamma)
    dt = time.perf_counter() - t0
    ok = (certified and set(lits) == {"equal"} and focal_var == "equal"
          and nonfocal.outcome == "distinct" and dt < 30)
    return ok, (f"focal f certified={certified}, {lits.count('equal')}/20 literals equal, "
                f"variable N {focal_var}; stored f on variable N: {nonfocal.outcome} "
                f"({nonfocal.reason}) in {dt:.1f}s")


def criterion_5() -> tuple[bool, str]:
    enc = nat_prime_encoding()
    sig = enc.sig
    sig.consts.update(G=Arrow(TOP, P), F=Arrow(P, P))
    big_g, big_f = Const("G"), Const("F")
    fold = case_fold(enc, big_g, big_f, P)
    zero, suc = enc.constructors["zero"], enc.constructors["suc"]
    nonfocal = certify_focal(big_f, sig) is None
    z = equiv(App(fold, App(zero, UNIT)), App(big_g, UNIT), sig).outcome
    steps = [equiv(App(fold, App(suc, enc.numeral(n))), App(big_f, App(fold, enc.numeral(n))),
                   sig).outcome for n in range(11)]
    ok = nonfocal and z == "equal" and set(steps) == {"equal"}
    return ok, f"zero' equation {z}; suc' equation {steps.count('equal')}/11 equal (N depth 0..10)"


def criterion_6() -> tuple[bool, str]:
    pairs = primitive_pairs(B) + [list_pair(B), tree_pair(B)]
    t0 = time.perf_counter()
    verdicts = [(p.name, validate_pair(p, samples=20, seed=SEED).outcome) for p in pairs]
    dt = time.perf_counter() - t0
    bad = [name for name, v in verdicts if v != "equal"]
    return not bad and dt < 60, (f"{len(pairs) - len(bad)}/{len(pairs)} pairs validated "
                                 f"(5 rows + list + tree) in {dt:.1f}s")


def criterion_7() -> tuple[bool, str]:
    t0 = time.perf_counter()
    report = demo_tree(4)
    dt = time.perf_counter() - t0
    s = report.summary
    leaves = sum(r.kind == "tree-leaf" for r in report.records)
    return (s.failed == 0 and s.total == 1446,
            f"{s.passed}/{s.total} literals of depth <= 4 ({leaves} leaves) in {dt:.1f}s")


def criterion_8() -> tuple[bool, str]:
    sig = default_signature()
    rng = random.Random(SEED)
    gen = TermGen(rng, sig)
    beta = eta = certified = 0
    for i in range(50):
        b1, b2, a = random_type(rng, 1), random_type(rng, 1), random_type(rng, 1)
        f1, f2 = gen.term(Arrow(b1, a), size=5), gen.term(Arrow(b2, a), size=5)
        j = 1 + i % 2
        m = gen.term(b1 if j == 1 else b2, size=5)
        lhs, rhs = case_beta_sides(f1, f2, j, m, sig)
        beta += equiv(lhs, rhs, sig).outcome == "equal"
        f = case_term(f1, b1, f2, b2, a)
        if certify_focal(f, sig) is None:
            continue
        certified += 1
        lhs, rhs = case_eta_sides(f, sig)
        eta += equiv(lhs, rhs, sig).outcome == "equal"
    stored_sig = sig.copy()
    stored_sig.consts["fk"] = Arrow(oplus(TOP, TOP), P)
    lhs, rhs = case_eta_sides(Const("fk"), stored_sig)
    stored = equiv(lhs, rhs, stored_sig).outcome
    ok = beta == 50 and certified == 50 and eta == 50 and stored == "distinct"
    return ok, (f"case-beta {beta}/50 equal; case-eta {eta}/{certified} certified-focal equal; "
                f"stored fk: {stored}")


def criterion_9() -> tuple[bool, str]:
    a1, a2, b, a = TConst("A₁"), TConst("A₂"), TConst("B"), TConst("A")
    sig = Signature()
    sig.nus["Streams"] = NuDecl("Streams", "α", Prod(BOT, TVar("α")))
    table = [
        (TOP, "⊥"),
        (Prod(a1, a2), "A₁+A₂"),
        (BOT, "⊤"),
        (Disj(a1, a2), "A₁×A₂"),
        (Arrow(b, a), "(B→R)×A"),
        (NuRef("Streams"), "μα.⊤+α"),
    ]
    got = [(show_ttype(cps_type(t, sig), symbols=True), want) for t, want in table]
    bad = [f"{g} != {w}" for g, w in got if g != w]
    return not bad, f"{len(table) - len(bad)}/{len(table)} lines reproduced" + (
        f" ({'; '.join(bad)})" if bad else "")


def _suite_snapshot(seed: int) -> list[str]:
    """JSON reports of the bundled scripts plus verdicts of a randomized batch."""
    out = [run_script(name, Options(seed=seed, samples=10)).to_json(timing=False)
           for name in BUNDLED]
    sig = default_signature()
    rng = random.Random(seed)
    gen = TermGen(rng, sig)
    for ax in AXIOMS:
        l, r = axiom_instance(ax, rng, gen, size=6)
        out.append(equiv(l, r, sig).outcome)
    out += [equiv(l, r, sig).outcome for l, r in random_pairs(seed, 40)]
    return out


def criterion_10() -> tuple[bool, str]:
    first, second = _suite_snapshot(SEED), _suite_snapshot(SEED)
    same = first == second
    return same, f"{len(first)} reports/verdicts, identical on re-run: {same}"


CRITERIA = {
    1: ("equality axioms", criterion_1),
    2: ("oracle agreement", criterion_2),
    3: ("naturals", criterion_3),
    4: ("focality phase transition", criterion_4),
    5: ("Streams' case equations", criterion_5),
    6: ("functor pairs and compositions", criterion_6),
    7: ("tree fold equations", criterion_7),
    8: ("case sugar laws", criterion_8),
    9: ("CPS type table", criterion_9),
    10: ("determinism", criterion_10),
}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n: int) -> None:
    _, fn = CRITERIA[n]
    ok, detail = fn()
    record(n, ok, detail)


def summary_lines() -> list[str]:
    return [f"criterion {n:>2} {'PASS' if RESULTS[n][0] else 'FAIL'}  "
            f"{CRITERIA[n][0]}: {RESULTS[n][1]}" for n in sorted(RESULTS)]


if __name__ == "__main__":
    for n, (_, fn) in CRITERIA.items():
        RESULTS[n] = fn()
        print(summary_lines()[-1], flush=True)
