"""Deterministic concrete syntax printer; output reparses with :mod:`.parser`."""
from __future__ import annotations

from mucalc.syntax.ast import (
    App, Arrow, Bot, Case, Compose, Const, Destr, Disj, Focus, Hole, Inj, Lam, Mu,
    MuPair, Named, NamedPair, NotF, NuRef, Numeral, Observe, Pair, Prod, Proj, TConst,
    Term, Top, TVar, Type, Unfocus, Unfold, Unit, Var, is_neg, split_oplus,
)


def pretty_type(t: Type, prec: int = 0) -> str:
    match t:
        case TConst(name) | TVar(name):
            return name
        case Top():
            return "Top"
        case Bot():
            return "Bot"
        case NuRef(name):
            return f"nu {name}"
        case Arrow(d, Bot()):
            return f"~{pretty_type(d, 4)}"
        case Arrow(d, c):
            s, p = f"{pretty_type(d, 1)} -> {pretty_type(c, 0)}", 0
        case Disj(l, r):
            parts = split_oplus(t)
            if parts is not None:
                s, p = f"{pretty_type(parts[0], 3)} (+) {pretty_type(parts[1], 2)}", 2
            else:
                s, p = f"{pretty_type(l, 2)} \\/ {pretty_type(r, 1)}", 1
        case Prod(l, r):
            s, p = f"{pretty_type(l, 4)} * {pretty_type(r, 3)}", 3
        case _:
            raise TypeError(f"not a type: {t!r}")
    return f"({s})" if prec > p else s


def pretty(m: Term, prec: int = 0) -> str:
    """Render a term; binders extend as far right as possible."""
    match m:
        case Var(x) | Const(x):
            return x
        case Unit():
            return "unit"
        case Hole():
            return "_"
        case Numeral(n):
            return f"#{n}"
        case Pair(l, r):
            return f"<{pretty(l)}, {pretty(r)}>"
        case Case(l, r):
            return f"case({pretty(l)}, {pretty(r)})"
        case Compose(f, g):
            return f"compose({pretty(f)}, {pretty(g)})"
        case Focus(f):
            return f"focus({pretty(f)})"
        case Unfocus(f):
            return f"unfocus({pretty(f)})"
        case NotF(f):
            return f"not({pretty(f)})"
        case Observe(nu, j):
            return f"{'head' if j == 1 else 'tail'}{{{nu}}}"
        case Unfold(nu, car, c):
            tag = nu if car is None else f"{nu}, {pretty_type(car)}"
            return f"unfold{{{tag}}}({pretty(c)})"
        case Lam(x, t, b):
            s, p = f"\\{x}:{pretty_type(t)}. {pretty(b)}", 0
        case Mu(a, t, b):
            s, p = f"mu {a}:{pretty_type(t)}. {pretty(b)}", 0
        case MuPair(a1, t1, a2, t2, b):
            s, p = f"mu ({a1}:{pretty_type(t1)}, {a2}:{pretty_type(t2)}). {pretty(b)}", 0
        case Named(a, b):
            s, p = f"[{a}] {pretty(b)}", 0
        case NamedPair(a1, a2, b):
            s, p = f"[{a1}, {a2}] {pretty(b)}", 0
        case App(f, a):
            s, p = f"{pretty(f, 1)} {pretty(a, 2)}", 1
        case Proj(j, b):
            s, p = f"pi{j} {pretty(b, 2)}", 1
        case Destr(nu, b):
            s, p = f"out{{{nu}}} {pretty(b, 2)}", 1
        case Inj(j, t, b):
            s, p = f"inj{j}[{pretty_type(t)}] {pretty(b, 2)}", 1
        case _:
            raise TypeError(f"not a term: {m!r}")
    return f"({s})" if prec > p else s


__all__ = ["pretty", "pretty_type", "is_neg"]
