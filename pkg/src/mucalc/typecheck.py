"""Annotation-driven typing for judgments ``G |- M : A | D``.

Every binder carries its type, so inference is syntax directed; the only
extension beyond the core rules is the typing of ``out{N}`` and ``unfold{N}``
for declared coinductive types.
"""
from __future__ import annotations

from typing import Mapping, Optional

from mucalc.syntax.ast import (
    BOT, TOP, App, Arrow, Bot, Const, Destr, Disj, Hole, Lam, Mu, MuPair, Named,
    NamedPair, NuRef, Pair, Prod, Proj, SUGAR, Signature, Term, TVar, Type, Unfold,
    Unit, Var, nu_refs, type_vars,
)
from mucalc.syntax.printer import pretty, pretty_type

TypingEnv = Mapping[str, Type]
ControlEnv = Mapping[str, Type]


class MuTypeError(Exception):
    """Typing failure. ``kind`` is one of: mismatch, unbound, not-a-function,
    not-a-product, not-a-disjunction, bad-nu, sugar, duplicate."""

    def __init__(self, kind: str, message: str, term: Optional[Term] = None,
                 expected: Optional[Type] = None, actual: Optional[Type] = None,
                 span: Optional[tuple[int, int]] = None):
        self.kind, self.term = kind, term
        self.expected, self.actual, self.span = expected, actual, span
        where = f" in {pretty(term)}" if term is not None else ""
        super().__init__(f"{kind}: {message}{where}")

    def with_span(self, span):
        self.span = span
        return self

    def location(self) -> str:
        return f"{self.span[0]}:{self.span[1]}" if self.span else "?"


def check_type_wf(t: Type, sig: Signature, term: Optional[Term] = None) -> None:
    for n in nu_refs(t):
        if n not in sig.nus:
            raise MuTypeError("bad-nu", f"undeclared coinductive type {n}", term)
    if type_vars(t):
        raise MuTypeError("bad-nu", f"type variable outside a nu body in {pretty_type(t)}", term)


def infer(gamma: TypingEnv, m: Term, delta: ControlEnv, sig: Optional[Signature] = None,
          hole: Optional[Type] = None) -> Type:
    """Return the unique ``A`` with ``gamma |- m : A | delta``.

    ``hole`` gives the type of a hole when ``m`` is a control context.
    """
    sig = sig or Signature()
    return _infer(dict(gamma), m, dict(delta), sig, hole)


def _infer(g: dict, m: Term, d: dict, sig: Signature, hole) -> Type:
    match m:
        case Const(c):
            if c not in sig.consts:
                raise MuTypeError("unbound", f"unknown constant {c}", m)
            return sig.consts[c]
        case Var(x):
            if x not in g:
                raise MuTypeError("unbound", f"unbound variable {x}", m)
            return g[x]
        case Unit():
            return TOP
        case Hole():
            if hole is None:
                raise MuTypeError("unbound", "hole outside a control context", m)
            return hole
        case Lam(x, t, body):
            check_type_wf(t, sig, m)
            return Arrow(t, _infer({**g, x: t}, body, d, sig, hole))
        case App(f, a):
            ft = _infer(g, f, d, sig, hole)
            if not isinstance(ft, Arrow):
                raise MuTypeError("not-a-function", f"applying a term of type {pretty_type(ft)}",
                                  m, actual=ft)
            at = _infer(g, a, d, sig, hole)
            if at != ft.dom:
                raise MuTypeError("mismatch", f"argument has type {pretty_type(at)}, "
                                  f"expected {pretty_type(ft.dom)}", m, ft.dom, at)
            return ft.cod
        case Pair(l, r):
            return Prod(_infer(g, l, d, sig, hole), _infer(g, r, d, sig, hole))
        case Proj(j, body):
            t = _infer(g, body, d, sig, hole)
            if not isinstance(t, Prod):
                raise MuTypeError("not-a-product", f"projecting from {pretty_type(t)}", m, actual=t)
            return t.left if j == 1 else t.right
        case Mu(a, t, body):
            check_type_wf(t, sig, m)
            _expect_bot(g, body, {**d, a: t}, sig, hole, m)
            return t
        case Named(a, body):
            if a not in d:
                raise MuTypeError("unbound", f"unbound control variable {a}", m)
            bt = _infer(g, body, d, sig, hole)
            if bt != d[a]:
                raise MuTypeError("mismatch", f"[{a}] expects {pretty_type(d[a])}, "
                                  f"got {pretty_type(bt)}", m, d[a], bt)
            return BOT
        case MuPair(a1, t1, a2, t2, body):
            check_type_wf(t1, sig, m)
            check_type_wf(t2, sig, m)
            _expect_bot(g, body, {**d, a1: t1, a2: t2}, sig, hole, m)
            return Disj(t1, t2)
        case NamedPair(a1, a2, body):
            for a in (a1, a2):
                if a not in d:
                    raise MuTypeError("unbound", f"unbound control variable {a}", m)
            bt = _infer(g, body, d, sig, hole)
            if not isinstance(bt, Disj):
                raise MuTypeError("not-a-disjunction", f"[{a1}, {a2}] applied to "
                                  f"{pretty_type(bt)}", m, actual=bt)
            want = Disj(d[a1], d[a2])
            if bt != want:
                raise MuTypeError("mismatch", f"expected {pretty_type(want)}", m, want, bt)
            return BOT
        case Destr(n, body):
            decl = _nu(sig, n, m)
            bt = _infer(g, body, d, sig, hole)
            if bt != NuRef(n):
                raise MuTypeError("mismatch", f"out{{{n}}} applied to {pretty_type(bt)}",
                                  m, NuRef(n), bt)
            return decl.instantiate(NuRef(n))
        case Unfold(n, carrier, coalg):
            decl = _nu(sig, n, m)
            ct = _infer(g, coalg, d, sig, hole)
            if not isinstance(ct, Arrow):
                raise MuTypeError("not-a-function", "coalgebra must be a function", m, actual=ct)
            a = ct.dom
            if carrier is not None and carrier != a:
                raise MuTypeError("mismatch", "coalgebra carrier differs from annotation",
                                  m, carrier, a)
            want = decl.instantiate(a)
            if ct.cod != want:
                raise MuTypeError("mismatch", f"coalgebra must return {pretty_type(want)}",
                                  m, want, ct.cod)
            return Arrow(a, NuRef(n))
        case _ if isinstance(m, SUGAR):
            raise MuTypeError("sugar", f"{type(m).__name__} must be elaborated first", m)
    raise MuTypeError("mismatch", f"unknown term {m!r}")


def _expect_bot(g, body, d, sig, hole, outer):
    bt = _infer(g, body, d, sig, hole)
    if not isinstance(bt, Bot):
        raise MuTypeError("mismatch", f"body of mu must have type Bot, got {pretty_type(bt)}",
                          outer, BOT, bt)


def _nu(sig: Signature, n: str, m: Term):
    if n not in sig.nus:
        raise MuTypeError("bad-nu", f"undeclared coinductive type {n}", m)
    return sig.nus[n]


def check(gamma: TypingEnv, m: Term, a: Type, delta: ControlEnv,
          sig: Optional[Signature] = None) -> None:
    """Raise :class:`MuTypeError` unless ``gamma |- m : a | delta``."""
    t = infer(gamma, m, delta, sig)
    if t != a:
        raise MuTypeError("mismatch", f"has type {pretty_type(t)}, expected {pretty_type(a)}",
                          m, a, t)


def type_of_or_none(gamma: TypingEnv, m: Term, delta: ControlEnv,
                    sig: Optional[Signature] = None) -> Optional[Type]:
    try:
        return infer(gamma, m, delta, sig)
    except MuTypeError:
        return None
