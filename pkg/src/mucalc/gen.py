"""Type-directed generation of well-typed terms, and instances of the equality axioms.

Everything here takes an explicit ``random.Random`` so that a seed fixes every
generated sample.
"""
from __future__ import annotations

import random
from typing import Iterator, Mapping, Optional

from mucalc.syntax.ast import (
    BOT, TOP, App, Arrow, Bot, Const, Disj, Lam, Mu, MuPair, Named, NamedPair, Pair,
    Prod, Proj, Signature, TConst, Term, Top, Type, Unit, Var, UNIT, HOLE,
)
from mucalc.syntax.names import fresh
from mucalc.syntax.subst import rename_cvar, struct_subst, subst_term

P, Q = TConst("P"), TConst("Q")


def default_signature() -> Signature:
    """Small constant signature used for sampling: ``p:P, q:Q, k0:P->Bot, c:P->P``."""
    return Signature(consts={"p": P, "q": Q, "k0": Arrow(P, BOT), "c": Arrow(P, P)})


def random_type(rng: random.Random, depth: int = 2,
                atoms: tuple[Type, ...] = (P, Q, TOP, BOT)) -> Type:
    if depth <= 0 or rng.random() < 0.35:
        return rng.choice(atoms)
    ctor = rng.choice((Arrow, Prod, Disj))
    return ctor(random_type(rng, depth - 1, atoms), random_type(rng, depth - 1, atoms))


class TermGen:
    """Random well-typed terms ``gamma |- M : A | delta`` of bounded size."""

    def __init__(self, rng: random.Random, sig: Optional[Signature] = None,
                 mu_bias: float = 0.3):
        self.rng = rng
        self.sig = sig or default_signature()
        self.mu_bias = mu_bias
        self._depth = 0

    def term(self, t: Type, gamma: Optional[Mapping[str, Type]] = None,
             delta: Optional[Mapping[str, Type]] = None, size: int = 6,
             tries: int = 50) -> Term:
        for _ in range(tries):
            m = self._gen(t, dict(gamma or {}), dict(delta or {}), size)
            if m is not None:
                return m
        raise ValueError(f"could not generate a term of type {t}")

    # -- internals
    def _heads(self, g: dict) -> list[tuple[Term, Type]]:
        out: list[tuple[Term, Type]] = [(Var(x), b) for x, b in g.items()]
        out += [(Const(c), b) for c, b in self.sig.consts.items()]
        return out

    def _names(self, g, d):
        return set(g) | set(d)

    def _elim(self, t: Type, g: dict, d: dict, size: int) -> Optional[Term]:
        """A spine ``h N1 .. pi_j ..`` whose result type is ``t``."""
        heads = self._heads(g)
        self.rng.shuffle(heads)
        for h, ht in heads:
            m = self._spine(h, ht, t, g, d, size - 1)
            if m is not None:
                return m
        return None

    def _spine(self, m: Term, mt: Type, t: Type, g, d, size) -> Optional[Term]:
        if mt == t:
            return m
        if size <= 0:
            return None
        match mt:
            case Arrow(b, c) if _reaches(c, t):
                arg = self._gen(b, g, d, max(1, size // 2))
                if arg is None:
                    return None
                return self._spine(App(m, arg), c, t, g, d, size - 1 - arg.size)
            case Prod(l, r):
                opts = [(j, c) for j, c in ((1, l), (2, r)) if _reaches(c, t)]
                if not opts:
                    return None
                j, c = self.rng.choice(opts)
                return self._spine(Proj(j, m), c, t, g, d, size - 1)
        return None

    MAX_DEPTH = 24

    def _gen(self, t: Type, g: dict, d: dict, size: int) -> Optional[Term]:
        if self._depth >= self.MAX_DEPTH or size <= 0:
            return None
        self._depth += 1
        try:
            return self._gen_at(t, g, d, size)
        finally:
            self._depth -= 1

    def _gen_at(self, t: Type, g: dict, d: dict, size: int) -> Optional[Term]:
        rng = self.rng
        if size <= 1 or rng.random() < 0.25:
            m = self._elim(t, g, d, 1 if size <= 1 else size)
            if m is not None:
                return m
        if size > 2 and rng.random() < self.mu_bias and not isinstance(t, Bot):
            a = fresh("a", self._names(g, d))
            body = self._gen(BOT, g, {**d, a: t}, size - 1)
            if body is not None:
                return Mu(a, t, body)
        match t:
            case Top():
                return UNIT
            case Arrow(b, c):
                x = fresh("x", self._names(g, d))
                body = self._gen(c, {**g, x: b}, d, size - 1)
                return None if body is None else Lam(x, b, body)
            case Prod(l, r):
                ml = self._gen(l, g, d, size // 2)
                mr = self._gen(r, g, d, size // 2)
                return None if ml is None or mr is None else Pair(ml, mr)
            case Disj(l, r):
                a1 = fresh("a", self._names(g, d))
                a2 = fresh("a", self._names(g, d) | {a1})
                body = self._gen(BOT, g, {**d, a1: l, a2: r}, size - 1)
                return None if body is None else MuPair(a1, l, a2, r, body)
            case Bot():
                return self._gen_bot(g, d, size)
        m = self._elim(t, g, d, size)
        if m is not None:
            return m
        if size > 1:
            a = fresh("a", self._names(g, d))
            body = self._gen(BOT, g, {**d, a: t}, size - 1)
            if body is not None:
                return Mu(a, t, body)
        return None

    def _gen_bot(self, g, d, size) -> Optional[Term]:
        rng = self.rng
        opts = ["named", "elim", "pair"]
        rng.shuffle(opts)
        for o in opts:
            if o == "named":
                cands = [a for a, at in d.items() if not isinstance(at, Bot)]
                if cands:
                    a = rng.choice(sorted(cands))
                    body = self._gen(d[a], g, d, size - 1)
                    if body is not None:
                        return Named(a, body)
            elif o == "pair":
                names = sorted(d)
                if len(names) >= 2 and size > 2:
                    a1, a2 = rng.sample(names, 2)
                    body = self._gen(Disj(d[a1], d[a2]), g, d, size - 1)
                    if body is not None:
                        return NamedPair(a1, a2, body)
            else:
                m = self._elim(BOT, g, d, max(size, 2))
                if m is not None:
                    return m
        return None


def _reaches(t: Type, target: Type) -> bool:
    """Can eliminations on a term of type ``t`` produce ``target``?"""
    if t == target:
        return True
    match t:
        case Arrow(_, c):
            return _reaches(c, target)
        case Prod(l, r):
            return _reaches(l, target) or _reaches(r, target)
    return False


# ---------------------------------------------------------------- enumeration


def enumerate_terms(t: Type, gamma: Optional[Mapping[str, Type]] = None,
                    delta: Optional[Mapping[str, Type]] = None,
                    sig: Optional[Signature] = None, max_size: int = 7) -> Iterator[Term]:
    """All terms of type ``t`` up to ``max_size`` in a restricted long form, smallest first.

    Eliminations only start from variables and constants, so the stream is
    finite; intermediate types are taken from the environment.
    """
    sig = sig or default_signature()
    for s in range(1, max_size + 1):
        yield from _enum(t, dict(gamma or {}), dict(delta or {}), sig, s)


def _enum(t: Type, g: dict, d: dict, sig: Signature, size: int) -> Iterator[Term]:
    if size <= 0:
        return
    names = set(g) | set(d)
    heads = [(Var(x), b) for x, b in sorted(g.items())]
    heads += [(Const(c), b) for c, b in sorted(sig.consts.items())]
    for h, ht in heads:
        yield from _enum_spine(h, ht, t, g, d, sig, size - 1)
    match t:
        case Top():
            if size == 1:
                yield UNIT
        case Arrow(b, c):
            x = fresh("x", names)
            for body in _enum(c, {**g, x: b}, d, sig, size - 1):
                yield Lam(x, b, body)
        case Prod(l, r):
            for k in range(1, size - 1):
                for ml in _enum(l, g, d, sig, k):
                    for mr in _enum(r, g, d, sig, size - 1 - k):
                        yield Pair(ml, mr)
        case Disj(l, r):
            a1 = fresh("a", names)
            a2 = fresh("a", names | {a1})
            for body in _enum(BOT, g, {**d, a1: l, a2: r}, sig, size - 1):
                yield MuPair(a1, l, a2, r, body)
        case Bot():
            for a, at in sorted(d.items()):
                if not isinstance(at, Bot):
                    for body in _enum(at, g, d, sig, size - 1):
                        yield Named(a, body)
            for a1, t1 in sorted(d.items()):
                for a2, t2 in sorted(d.items()):
                    if a1 != a2:
                        for body in _enum(Disj(t1, t2), g, d, sig, size - 1):
                            if not isinstance(body, MuPair):
                                yield NamedPair(a1, a2, body)
    if not isinstance(t, (Bot, Disj)):
        a = fresh("a", names)
        for body in _enum(BOT, g, {**d, a: t}, sig, size - 1):
            if isinstance(body, Named) and body.cvar == a:
                continue  # mu a. [a] M duplicates M
            yield Mu(a, t, body)


def _enum_spine(m, mt, t, g, d, sig, budget) -> Iterator[Term]:
    if mt == t and budget == 0:
        yield m
    if budget <= 0:
        return
    match mt:
        case Arrow(b, c) if _reaches(c, t):
            for k in range(1, budget + 1):
                for arg in _enum(b, g, d, sig, k):
                    yield from _enum_spine(App(m, arg), c, t, g, d, sig, budget - k)
        case Prod(l, r):
            for j, c in ((1, l), (2, r)):
                if _reaches(c, t):
                    yield from _enum_spine(Proj(j, m), c, t, g, d, sig, budget - 1)


# ---------------------------------------------------------------- axiom instances


def axiom_instance(rule: str, rng: random.Random, gen: Optional[TermGen] = None,
                   size: int = 5) -> tuple[Term, Term]:
    """A closed, well-typed instance ``(lhs, rhs)`` of one equality axiom.

    Axioms whose sides have type ``Bot`` under free control variables are
    closed off with a ``mu`` binder.
    """
    gen = gen or TermGen(rng)
    ty = lambda: random_type(rng, 1)  # noqa: E731
    match rule:
        case "beta":
            b, a = ty(), ty()
            m = gen.term(a, {"x": b}, size=size)
            n = gen.term(b, size=size)
            return App(Lam("x", b, m), n), subst_term(m, "x", n)
        case "lam-eta":
            b, a = ty(), ty()
            m = gen.term(Arrow(b, a), size=size)
            x = fresh("x", m.fv)
            return Lam(x, b, App(m, Var(x))), m
        case "proj":
            a1, a2 = ty(), ty()
            m1, m2 = gen.term(a1, size=size), gen.term(a2, size=size)
            j = rng.choice((1, 2))
            return Proj(j, Pair(m1, m2)), (m1 if j == 1 else m2)
        case "pair-eta":
            m = gen.term(Prod(ty(), ty()), size=size)
            return Pair(Proj(1, m), Proj(2, m)), m
        case "top":
            return UNIT, gen.term(TOP, size=size + 1)
        case "rename":
            a = ty()
            m = gen.term(BOT, delta={"a": a, "b": a}, size=size)
            return Mu("b", a, Named("b", Mu("a", a, m))), Mu("b", a, rename_cvar(m, "a", "b"))
        case "mu-eta":
            a = ty()
            m = gen.term(a, size=size)
            return Mu("a", a, Named("a", m)), m
        case "mupair-named":
            a1, a2 = ty(), ty()
            m = gen.term(BOT, delta={"a1": a1, "a2": a2, "b1": a1, "b2": a2}, size=size)
            body = rename_cvar(rename_cvar(m, "a1", "b1"), "a2", "b2")
            lhs = NamedPair("b1", "b2", MuPair("a1", a1, "a2", a2, m))
            return (MuPair("b1", a1, "b2", a2, lhs), MuPair("b1", a1, "b2", a2, body))
        case "mupair-eta":
            a1, a2 = ty(), ty()
            m = gen.term(Disj(a1, a2), size=size)
            return MuPair("a1", a1, "a2", a2, NamedPair("a1", "a2", m)), m
        case "bot":
            m = gen.term(BOT, delta={"b": BOT}, size=size)
            return Mu("b", BOT, Named("b", m)), Mu("b", BOT, m)
        case "mu-app":
            b, a = ty(), ty()
            m = gen.term(BOT, delta={"a": Arrow(b, a)}, size=size)
            n = gen.term(b, size=size)
            rhs = Mu("b", a, struct_subst(m, "a", Named("b", App(HOLE, n)), Arrow(b, a)))
            return App(Mu("a", Arrow(b, a), m), n), rhs
        case "mu-proj":
            a1, a2 = ty(), ty()
            t = Prod(a1, a2)
            m = gen.term(BOT, delta={"a": t}, size=size)
            j = rng.choice((1, 2))
            rhs = Mu("b", a1 if j == 1 else a2, struct_subst(m, "a", Named("b", Proj(j, HOLE)), t))
            return Proj(j, Mu("a", t, m)), rhs
        case "namedpair-mu":
            a1, a2 = ty(), ty()
            t = Disj(a1, a2)
            m = gen.term(BOT, delta={"a": t, "a1": a1, "a2": a2}, size=size)
            lhs = NamedPair("a1", "a2", Mu("a", t, m))
            rhs = struct_subst(m, "a", NamedPair("a1", "a2", HOLE), t)
            return MuPair("a1", a1, "a2", a2, lhs), MuPair("a1", a1, "a2", a2, rhs)
    raise KeyError(rule)
