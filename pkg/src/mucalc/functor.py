"""Functorial actions generated from a type with one type variable.

``fmap(body, var, h, a, b)`` turns ``h : a -> b`` into a term of type
``body[a/var] -> body[b/var]``. Negative occurrences are handled by the
contravariant action; disjunction nodes use mu-pair plumbing, which is only a
functor on focal arguments.
"""
from __future__ import annotations

from typing import Iterable

from mucalc.syntax.ast import (
    App, Arrow, Disj, Lam, Mu, MuPair, Named, NamedPair, Pair, Prod, Proj, Term,
    TVar, Type, Var, type_subst, type_vars,
)
from mucalc.syntax.names import all_names, fresh


class VarianceError(ValueError):
    pass


class _Action:
    def __init__(self, var: str, h: Term, a: Type, b: Type, avoid: Iterable[str]):
        self.var, self.h, self.a, self.b = var, h, a, b
        self.used = set(avoid) | all_names(h)

    def name(self, base: str) -> str:
        n = fresh(base, self.used)
        self.used.add(n)
        return n

    def at(self, t: Type, side: Type) -> Type:
        return type_subst(t, self.var, side)

    def co(self, t: Type, x: Term) -> Term:
        """``x : t[a]``  ->  term of type ``t[b]``."""
        if self.var not in type_vars(t):
            return x
        match t:
            case TVar(_):
                return App(self.h, x)
            case Prod(l, r):
                return Pair(self.co(l, Proj(1, x)), self.co(r, Proj(2, x)))
            case Arrow(d, c):
                y = self.name("y")
                return Lam(y, self.at(d, self.b), self.co(c, App(x, self.contra(d, Var(y)))))
            case Disj(l, r):
                b1, b2 = self.name("b"), self.name("b")
                a1, a2 = self.name("a"), self.name("a")
                inner = Mu(a2, self.at(r, self.a), NamedPair(a1, a2, x))
                mid = Mu(a1, self.at(l, self.a), Named(b2, self.co(r, inner)))
                return MuPair(b1, self.at(l, self.b), b2, self.at(r, self.b),
                              Named(b1, self.co(l, mid)))
        raise VarianceError(f"cannot map over {t!r}")

    def contra(self, t: Type, y: Term) -> Term:
        """``y : t[b]``  ->  term of type ``t[a]``; ``t`` must be contravariant."""
        if self.var not in type_vars(t):
            return y
        match t:
            case TVar(_):
                raise VarianceError("type variable in a negative position of a covariant functor")
            case Prod(l, r):
                return Pair(self.contra(l, Proj(1, y)), self.contra(r, Proj(2, y)))
            case Arrow(d, c):
                z = self.name("z")
                return Lam(z, self.at(d, self.a), self.contra(c, App(y, self.co(d, Var(z)))))
            case Disj(l, r):
                b1, b2 = self.name("b"), self.name("b")
                a1, a2 = self.name("a"), self.name("a")
                inner = Mu(a2, self.at(r, self.b), NamedPair(a1, a2, y))
                mid = Mu(a1, self.at(l, self.b), Named(b2, self.contra(r, inner)))
                return MuPair(b1, self.at(l, self.a), b2, self.at(r, self.a),
                              Named(b1, self.contra(l, mid)))
        raise VarianceError(f"cannot map over {t!r}")


def fmap(body: Type, var: str, h: Term, a: Type, b: Type, avoid: Iterable[str] = ()) -> Term:
    """Action of ``body`` (as a functor in ``var``) on ``h : a -> b``."""
    act = _Action(var, h, a, b, avoid)
    x = act.name("x")
    return Lam(x, type_subst(body, var, a), act.co(body, Var(x)))


def fmap_at(body: Type, var: str, h: Term, a: Type, b: Type, x: Term,
            avoid: Iterable[str] = ()) -> Term:
    """``fmap(...)`` already applied to ``x`` (no beta redex at the root)."""
    act = _Action(var, h, a, b, set(avoid) | all_names(x))
    return act.co(body, x)
