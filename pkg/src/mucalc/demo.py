"""Fold equations of the derived data types, checked case by case."""
from __future__ import annotations

import time
from typing import Optional, Sequence

from mucalc.datatypes import (
    case_fold, list_encoding, nat_encoding, shape_depth, tree_encoding, tree_shapes,
)
from mucalc.report import RunReport
from mucalc.rewrite import equiv
from mucalc.syntax.ast import UNIT, App, Arrow, Const, Pair, Prod, Signature, TConst, Term, Top, Type
from mucalc.syntax.printer import pretty
from mucalc.verdict import EQUAL, Verdict

P = TConst("P")


def _record(report: RunReport, kind: str, lhs: Term, rhs: Term, sig: Signature,
            fuel: Optional[int], label: str) -> Verdict:
    t0 = time.perf_counter()
    v = equiv(lhs, rhs, sig, fuel=fuel)
    report.add(kind, v.outcome, v.outcome == EQUAL, expected=EQUAL, inputs=[label],
               reason=v.reason, witness=v.witness,
               trace_length=len(v.left_trace) + len(v.right_trace),
               wall_time=round(time.perf_counter() - t0, 6))
    return v


def iterate(f: Term, x: Term, n: int) -> Term:
    for _ in range(n):
        x = App(f, x)
    return x


def demo_nat(max_n: int = 20, fuel: Optional[int] = None, start: int = 0) -> RunReport:
    """``fold(g, f)(n) == f^n (g unit)`` for ``start <= n < start + max_n``."""
    enc = nat_encoding()
    sig = enc.sig
    sig.consts.update(g=Arrow(Top(), P), f=Arrow(P, P))
    g, f = Const("g"), Const("f")
    fold = enc.fold_gf(g, f, P)
    report = RunReport(command="demo nat")
    for n in range(start, start + max_n):
        _record(report, "nat-fold", App(fold, enc.numeral(n)), iterate(f, App(g, UNIT), n),
                sig, fuel, f"fold(g, f) #{n} == f^{n} (g unit)")
    return report


def demo_list(length: int = 8, elem: Optional[Term] = None, elem_type: Type = TConst("B"),
              fuel: Optional[int] = None, extra_consts: Optional[dict] = None) -> RunReport:
    """``fold(nil) == G unit`` and ``fold(cons <e, l>) == F <e, fold l>`` for lists up to ``length``."""
    elem = elem if elem is not None else Const("b0")
    enc = list_encoding(elem_type)
    sig = enc.sig
    sig.consts.update(G=Arrow(Top(), P), F=Arrow(Prod(elem_type, P), P))
    if extra_consts:
        sig.consts.update(extra_consts)
    elif isinstance(elem, Const):
        sig.consts.setdefault(elem.name, elem_type)
    g, f = Const("G"), Const("F")
    fold = case_fold(enc, g, f, P)
    report = RunReport(command="demo list")
    _record(report, "list-nil", App(fold, enc.nil()), App(g, UNIT), sig, fuel,
            "fold nil == G unit")
    shown = pretty(elem)
    for k in range(length):
        tail = enc.literal([elem] * k)
        _record(report, "list-cons", App(fold, enc.cons(elem, tail)),
                App(f, Pair(elem, App(fold, tail))), sig, fuel,
                f"fold (cons <{shown}, [{shown}]*{k}>) == F <{shown}, fold [{shown}]*{k}>")
    return report


def _shape(s) -> str:
    return f"<{_shape(s[0])}, {_shape(s[1])}>" if isinstance(s, tuple) else pretty(s)


def demo_tree(depth: int = 4, alphabet: Sequence[str] = ("l1", "l2"),
              fuel: Optional[int] = None) -> RunReport:
    """Leaf and fork equations of the tree fold on every literal of depth at most ``depth``."""
    enc = tree_encoding()
    sig = enc.sig
    sig.consts.update(G=Arrow(enc.elem, P), F=Arrow(Prod(P, P), P))
    letters = [Const(a) for a in alphabet]
    for a in alphabet:
        sig.consts[a] = enc.elem
    g, f = Const("G"), Const("F")
    fold = enc.quoted_fold(g, f, P)
    report = RunReport(command="demo tree")
    shapes = sorted(tree_shapes(depth, letters), key=shape_depth)
    for s in shapes:
        if isinstance(s, tuple):
            lhs = App(fold, enc.literal(s))
            rhs = App(f, Pair(App(fold, enc.literal(s[0])), App(fold, enc.literal(s[1]))))
            _record(report, "tree-fork", lhs, rhs, sig, fuel,
                    f"fold {_shape(s)} == F <fold {_shape(s[0])}, fold {_shape(s[1])}>")
        else:
            _record(report, "tree-leaf", App(fold, enc.leaf(s)), App(g, s), sig, fuel,
                    f"fold (leaf {pretty(s)}) == G {pretty(s)}")
    return report


__all__ = ["demo_list", "demo_nat", "demo_tree", "iterate"]
