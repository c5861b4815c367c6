"""Abstract syntax of the call-by-name lambda-mu calculus.

Types and terms are immutable dataclasses. Sugar nodes (``Inj``, ``Case``,
``Focus`` ...) are ordinary members of the term tree and are removed by
:func:`mucalc.syntax.elaborate.elaborate`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional


# ---------------------------------------------------------------- types


class Type:
    __slots__ = ()


@dataclass(frozen=True)
class TConst(Type):
    name: str


@dataclass(frozen=True)
class Arrow(Type):
    dom: Type
    cod: Type


@dataclass(frozen=True)
class Top(Type):
    pass


@dataclass(frozen=True)
class Prod(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class Bot(Type):
    pass


@dataclass(frozen=True)
class Disj(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class NuRef(Type):
    """Reference to a declared coinductive type."""
    name: str


@dataclass(frozen=True)
class TVar(Type):
    """Type variable; only legal inside coinductive declaration bodies."""
    name: str


TOP = Top()
BOT = Bot()


def neg(a: Type) -> Type:
    return Arrow(a, BOT)


def dneg(a: Type) -> Type:
    return neg(neg(a))


def oplus(a: Type, b: Type) -> Type:
    return Disj(dneg(a), dneg(b))


def is_neg(a: Type) -> bool:
    return isinstance(a, Arrow) and isinstance(a.cod, Bot)


def split_oplus(a: Type) -> Optional[tuple[Type, Type]]:
    """Return ``(B1, B2)`` when ``a`` is ``B1 (+) B2``."""
    if isinstance(a, Disj):
        l, r = a.left, a.right
        if is_neg(l) and is_neg(l.dom) and is_neg(r) and is_neg(r.dom):
            return l.dom.dom, r.dom.dom
    return None


def type_subst(t: Type, var: str, by: Type) -> Type:
    match t:
        case TVar(name):
            return by if name == var else t
        case Arrow(d, c):
            return Arrow(type_subst(d, var, by), type_subst(c, var, by))
        case Prod(l, r):
            return Prod(type_subst(l, var, by), type_subst(r, var, by))
        case Disj(l, r):
            return Disj(type_subst(l, var, by), type_subst(r, var, by))
        case _:
            return t


def type_vars(t: Type) -> frozenset[str]:
    match t:
        case TVar(name):
            return frozenset([name])
        case Arrow(a, b) | Prod(a, b) | Disj(a, b):
            return type_vars(a) | type_vars(b)
        case _:
            return frozenset()


def nu_refs(t: Type) -> frozenset[str]:
    match t:
        case NuRef(name):
            return frozenset([name])
        case Arrow(a, b) | Prod(a, b) | Disj(a, b):
            return nu_refs(a) | nu_refs(b)
        case _:
            return frozenset()


# ---------------------------------------------------------------- terms


class Term:
    """Base class. Free-variable sets are cached per node."""

    @cached_property
    def fv(self) -> frozenset[str]:
        from mucalc.syntax.names import free_vars
        return free_vars(self)

    @cached_property
    def fcv(self) -> frozenset[str]:
        from mucalc.syntax.names import free_cvars
        return free_cvars(self)

    @cached_property
    def size(self) -> int:
        from mucalc.syntax.names import term_size
        return term_size(self)


@dataclass(frozen=True, eq=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Lam(Term):
    var: str
    ty: Type
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Unit(Term):
    pass


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Proj(Term):
    index: int
    body: Term


@dataclass(frozen=True)
class Mu(Term):
    cvar: str
    ty: Type
    body: Term


@dataclass(frozen=True)
class Named(Term):
    cvar: str
    body: Term


@dataclass(frozen=True)
class MuPair(Term):
    cvar1: str
    ty1: Type
    cvar2: str
    ty2: Type
    body: Term


@dataclass(frozen=True)
class NamedPair(Term):
    cvar1: str
    cvar2: str
    body: Term


@dataclass(frozen=True)
class Unfold(Term):
    """Mediating map into a final coalgebra; ``carrier`` is filled by elaboration."""
    nu: str
    carrier: Optional[Type]
    coalg: Term


@dataclass(frozen=True)
class Destr(Term):
    """Structure map ``out`` of a declared coinductive type."""
    nu: str
    body: Term


@dataclass(frozen=True)
class Hole(Term):
    pass


# sugar


@dataclass(frozen=True)
class Inj(Term):
    index: int
    ty: Type  # the whole B1 (+) B2
    body: Term


@dataclass(frozen=True)
class Case(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Focus(Term):
    fn: Term


@dataclass(frozen=True)
class Unfocus(Term):
    fn: Term


@dataclass(frozen=True)
class NotF(Term):
    fn: Term


@dataclass(frozen=True)
class Compose(Term):
    outer: Term
    inner: Term


@dataclass(frozen=True)
class Observe(Term):
    """``head{N}`` / ``tail{N}``: projection composed with ``out``."""
    nu: str
    index: int


@dataclass(frozen=True)
class Numeral(Term):
    value: int


SUGAR = (Inj, Case, Focus, Unfocus, NotF, Compose, Observe, Numeral)

UNIT = Unit()
HOLE = Hole()


def has_sugar(m: Term) -> bool:
    from mucalc.syntax.names import subterms
    return any(isinstance(s, SUGAR) for s in subterms(m))


def apps(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


# ---------------------------------------------------------------- declarations


@dataclass(frozen=True)
class NuDecl:
    name: str
    var: str
    body: Type

    def instantiate(self, carrier: Type) -> Type:
        return type_subst(self.body, self.var, carrier)


@dataclass
class Signature:
    """Read-only table of constants and coinductive declarations."""
    consts: dict[str, Type] = field(default_factory=dict)
    nus: dict[str, NuDecl] = field(default_factory=dict)

    def copy(self) -> "Signature":
        return Signature(dict(self.consts), dict(self.nus))
