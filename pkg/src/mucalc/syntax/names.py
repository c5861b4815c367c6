"""Free names, fresh-name generation and generic traversal."""
from __future__ import annotations

import re
from typing import Iterable, Iterator

from mucalc.syntax.ast import (
    App, Case, Compose, Const, Destr, Focus, Hole, Inj, Lam, Mu, MuPair, Named,
    NamedPair, NotF, Observe, Pair, Proj, Term, Unfocus, Unfold, Var,
)

_TRAILING_DIGITS = re.compile(r"\d+$")


def fresh(base: str, avoid: Iterable[str]) -> str:
    """Smallest ``base<k>`` (k >= 1) not in ``avoid``; digits of ``base`` are dropped.

    Depends only on its arguments, so generated names are stable across runs.
    """
    avoid = set(avoid)
    stem = _TRAILING_DIGITS.sub("", base) or "v"
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


def children(m: Term) -> tuple[Term, ...]:
    match m:
        case Lam(_, _, b) | Proj(_, b) | Mu(_, _, b) | Named(_, b) | MuPair(_, _, _, _, b) \
                | NamedPair(_, _, b) | Destr(_, b) | Inj(_, _, b):
            return (b,)
        case App(f, a):
            return (f, a)
        case Pair(l, r) | Case(l, r) | Compose(l, r):
            return (l, r)
        case Unfold(_, _, c):
            return (c,)
        case Focus(f) | Unfocus(f) | NotF(f):
            return (f,)
        case _:
            return ()


def subterms(m: Term) -> Iterator[Term]:
    stack = [m]
    while stack:
        t = stack.pop()
        yield t
        stack.extend(reversed(children(t)))


def term_size(m: Term) -> int:
    return 1 + sum(c.size for c in children(m))


def free_vars(m: Term) -> frozenset[str]:
    match m:
        case Var(x):
            return frozenset([x])
        case Lam(x, _, b):
            return b.fv - {x}
        case _:
            out: frozenset[str] = frozenset()
            for c in children(m):
                out |= c.fv
            return out


def free_cvars(m: Term) -> frozenset[str]:
    match m:
        case Mu(a, _, b):
            return b.fcv - {a}
        case MuPair(a1, _, a2, _, b):
            return b.fcv - {a1, a2}
        case Named(a, b):
            return b.fcv | {a}
        case NamedPair(a1, a2, b):
            return b.fcv | {a1, a2}
        case _:
            out: frozenset[str] = frozenset()
            for c in children(m):
                out |= c.fcv
            return out


def bound_names(m: Term) -> set[str]:
    out: set[str] = set()
    for t in subterms(m):
        match t:
            case Lam(x, _, _):
                out.add(x)
            case Mu(a, _, _):
                out.add(a)
            case MuPair(a1, _, a2, _, _):
                out.update((a1, a2))
    return out


def all_names(*terms: Term) -> set[str]:
    out: set[str] = set()
    for m in terms:
        out |= m.fv | m.fcv | bound_names(m)
    return out


def hole_count(m: Term) -> int:
    return sum(1 for t in subterms(m) if isinstance(t, Hole))


def is_closed(m: Term) -> bool:
    return not m.fv and not m.fcv


def contains_coinductive(m: Term) -> bool:
    return any(isinstance(t, (Unfold, Destr, Observe)) for t in subterms(m))


def constants_of(m: Term) -> set[str]:
    return {t.name for t in subterms(m) if isinstance(t, Const)}


__all__ = [
    "fresh", "children", "subterms", "term_size", "free_vars", "free_cvars",
    "bound_names", "all_names", "hole_count", "is_closed", "contains_coinductive",
    "constants_of",
]
