"""Expansion of sugar nodes into core terms.

Definitions are inlined and constants resolved during the same pass, since the
expansions of ``case``/``focus``/``not`` need the types of their arguments.
"""
from __future__ import annotations

from typing import Callable, Mapping, Optional

from mucalc.syntax.ast import (
    App, Arrow, Case, Compose, Const, Destr, Focus, Inj, Lam, Mu, MuPair, Named,
    NamedPair, NotF, NuRef, Numeral, Observe, Prod, Proj, Signature, Term, Type,
    Unfocus, Unfold, Var, dneg, neg, split_oplus,
)
from mucalc.syntax.names import all_names, children, fresh
from mucalc.syntax.subst import _rebuild


class ElaborationError(ValueError):
    pass


NumeralHook = Callable[[int], Term]


def elaborate(m: Term, sig: Optional[Signature] = None,
              gamma: Optional[Mapping[str, Type]] = None,
              delta: Optional[Mapping[str, Type]] = None,
              defs: Optional[Mapping[str, Term]] = None,
              numeral: Optional[NumeralHook] = None) -> Term:
    """Return ``m`` with every sugar node expanded.

    ``defs`` maps top-level names to already elaborated closed terms;
    ``numeral`` builds the term for ``#n``.
    """
    e = _Elab(sig or Signature(), defs or {}, numeral)
    return e.go(m, dict(gamma or {}), dict(delta or {}))


def _fresh(base: str, *terms: Term, extra=()) -> str:
    return fresh(base, all_names(*terms) | set(extra))


class _Elab:
    def __init__(self, sig: Signature, defs: Mapping[str, Term], numeral):
        self.sig, self.defs, self.numeral = sig, defs, numeral

    def type_of(self, m: Term, g, d) -> Type:
        from mucalc.typecheck import MuTypeError, infer
        try:
            return infer(g, m, d, self.sig)
        except MuTypeError as exc:
            raise ElaborationError(f"cannot type argument of sugar: {exc}") from exc

    def fn_type(self, m: Term, g, d, what: str) -> Arrow:
        t = self.type_of(m, g, d)
        if not isinstance(t, Arrow):
            raise ElaborationError(f"{what} expects a function")
        return t

    def go(self, m: Term, g: dict, d: dict) -> Term:
        match m:
            case Var(x):
                if x in g:
                    return m
                if x in self.defs:
                    return self.defs[x]
                if x in self.sig.consts:
                    return Const(x)
                return m
            case Lam(x, t, b):
                return Lam(x, t, self.go(b, {**g, x: t}, d))
            case Mu(a, t, b):
                return Mu(a, t, self.go(b, g, {**d, a: t}))
            case MuPair(a1, t1, a2, t2, b):
                return MuPair(a1, t1, a2, t2, self.go(b, g, {**d, a1: t1, a2: t2}))
            case Inj(j, t, b):
                parts = split_oplus(t)
                if parts is None:
                    raise ElaborationError("inj needs an annotation of the form B1 (+) B2")
                body = self.go(b, g, d)
                a1 = _fresh("a", body, extra=d)
                a2 = _fresh("a", body, extra=set(d) | {a1})
                k = _fresh("k", body, extra=g)
                bj = parts[j - 1]
                inner = Named(a1 if j == 1 else a2, Lam(k, neg(bj), App(Var(k), body)))
                return MuPair(a1, dneg(parts[0]), a2, dneg(parts[1]), inner)
            case Case(f1, f2):
                f1, f2 = self.go(f1, g, d), self.go(f2, g, d)
                t1, t2 = self.fn_type(f1, g, d, "case"), self.fn_type(f2, g, d, "case")
                if t1.cod != t2.cod:
                    raise ElaborationError("case branches must share a result type")
                return case_term(f1, t1.dom, f2, t2.dom, t1.cod, extra=set(g) | set(d))
            case Focus(f):
                f = self.go(f, g, d)
                t = self.fn_type(f, g, d, "focus")
                return focus_term(f, t.dom, t.cod, extra=set(g) | set(d))
            case Unfocus(f):
                f = self.go(f, g, d)
                t = self.fn_type(f, g, d, "unfocus")
                dom = t.dom
                if not (isinstance(dom, Arrow) and isinstance(dom.dom, Arrow)):
                    raise ElaborationError("unfocus expects a function from ~~B")
                b = dom.dom.dom
                x = _fresh("x", f, extra=g)
                k = _fresh("k", f, extra=set(g) | {x})
                return Lam(x, b, App(f, Lam(k, neg(b), App(Var(k), Var(x)))))
            case NotF(f):
                f = self.go(f, g, d)
                t = self.fn_type(f, g, d, "not")
                return not_term(f, t.dom, t.cod, extra=set(g) | set(d))
            case Compose(f, h):
                f, h = self.go(f, g, d), self.go(h, g, d)
                th = self.fn_type(h, g, d, "compose")
                x = _fresh("x", f, h, extra=g)
                return Lam(x, th.dom, App(f, App(h, Var(x))))
            case Observe(nu, j):
                decl = self.sig.nus.get(nu)
                if decl is None:
                    raise ElaborationError(f"unknown destructor on undeclared type {nu}")
                if not isinstance(decl.body, Prod):
                    raise ElaborationError(f"head/tail need a product body for {nu}")
                return Lam("x", NuRef(nu), Proj(j, Destr(nu, Var("x"))))
            case Numeral(n):
                if self.numeral is not None:
                    return self.numeral(n)
                if "zero" in self.defs and "suc" in self.defs:
                    from mucalc.syntax.ast import UNIT
                    t = App(self.defs["zero"], UNIT)
                    for _ in range(n):
                        t = App(self.defs["suc"], t)
                    return t
                raise ElaborationError("numerals need definitions of zero and suc")
            case Unfold(nu, carrier, c):
                c = self.go(c, g, d)
                if carrier is None:
                    carrier = self.fn_type(c, g, d, "unfold").dom
                return Unfold(nu, carrier, c)
        return _rebuild(m, [self.go(c, g, d) for c in children(m)])


def case_term(f1: Term, b1: Type, f2: Term, b2: Type, a: Type, extra=()) -> Term:
    """``case[F1, F2]`` at ``B1 (+) B2 -> A``."""
    avoid = all_names(f1, f2) | set(extra)
    x = fresh("x", avoid)
    ca = fresh("a", avoid | {x})
    cb1 = fresh("b", avoid | {x, ca})
    cb2 = fresh("b", avoid | {x, ca, cb1})
    x1 = fresh("x", avoid | {x})
    x2 = fresh("x", avoid | {x, x1})
    from mucalc.syntax.ast import oplus
    inner = App(Mu(cb1, dneg(b1), NamedPair(cb1, cb2, Var(x))),
                Lam(x1, b1, Named(ca, App(f1, Var(x1)))))
    body = App(Mu(cb2, dneg(b2), inner), Lam(x2, b2, Named(ca, App(f2, Var(x2)))))
    return Lam(x, oplus(b1, b2), Mu(ca, a, body))


def focus_term(f: Term, b: Type, a: Type, extra=()) -> Term:
    """``focus(F) = \\x:~~B. mu a:A. x (\\y:B. [a] F y)``."""
    avoid = all_names(f) | set(extra)
    x = fresh("x", avoid)
    ca = fresh("a", avoid | {x})
    y = fresh("y", avoid | {x, ca})
    return Lam(x, dneg(b), Mu(ca, a, App(Var(x), Lam(y, b, Named(ca, App(f, Var(y)))))))


def not_term(f: Term, b: Type, a: Type, extra=()) -> Term:
    """``not(F) = \\k:~A. \\x:B. k (F x)``."""
    avoid = all_names(f) | set(extra)
    k = fresh("k", avoid)
    x = fresh("x", avoid | {k})
    return Lam(k, neg(a), Lam(x, b, App(Var(k), App(f, Var(x)))))
