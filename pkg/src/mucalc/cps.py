"""CPS translation into a pure target calculus, used as an equivalence oracle.

Source products become target sums, disjunctions become products, ``Top`` is
sent to the empty type and ``Bot`` to the unit type, against an opaque answer
type ``R``. The target normalizer implements beta, eta for arrows, products,
unit and empty, commuting conversions for ``case``/``absurd`` and a
syntactic form of sum-eta.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from mucalc.syntax import ast as S
from mucalc.syntax.names import contains_coinductive, fresh, subterms
from mucalc.syntax.printer import pretty
from mucalc.verdict import DISTINCT, EQUAL, UNKNOWN, Verdict


class FragmentError(ValueError):
    """Raised for coinductive constructs, which the oracle does not translate."""


# ---------------------------------------------------------------- target types


class TType:
    __slots__ = ()

    def __str__(self) -> str:
        return show_ttype(self)


@dataclass(frozen=True)
class Answer(TType):
    pass


@dataclass(frozen=True)
class Base(TType):
    name: str


@dataclass(frozen=True)
class One(TType):
    pass


@dataclass(frozen=True)
class Zero(TType):
    pass


@dataclass(frozen=True)
class Times(TType):
    left: TType
    right: TType


@dataclass(frozen=True)
class Plus(TType):
    left: TType
    right: TType


@dataclass(frozen=True)
class Fun(TType):
    dom: TType
    cod: TType


@dataclass(frozen=True)
class TyVar(TType):
    name: str


@dataclass(frozen=True)
class Ind(TType):
    """Inductive image of a declared coinductive type (documentation only)."""
    name: str
    var: str
    body: TType


R = Answer()
ONE = One()
ZERO = Zero()


def show_ttype(t: TType, prec: int = 0, symbols: bool = False) -> str:
    """ASCII rendering, or the mathematical one (``⊤ ⊥ × + → μ``) with ``symbols``."""
    sh = lambda u, q: show_ttype(u, q, symbols)  # noqa: E731
    match t:
        case Answer():
            return "R"
        case Base(n) | TyVar(n):
            return n
        case One():
            return "⊤" if symbols else "Unit"
        case Zero():
            return "⊥" if symbols else "Empty"
        case Ind(_, v, b):
            s, p = (f"μ{v}.{sh(b, 0)}" if symbols else f"mu {v}. {sh(b, 0)}"), 0
        case Fun(d, c):
            s, p = f"{sh(d, 1)}{'→' if symbols else ' -> '}{sh(c, 0)}", 0
        case Plus(l, r):
            s, p = f"{sh(l, 2)}{'+' if symbols else ' + '}{sh(r, 1)}", 1
        case Times(l, r):
            s, p = f"{sh(l, 3)}{'×' if symbols else ' * '}{sh(r, 2)}", 2
    return f"({s})" if prec > p else s


def cps_type(a: S.Type, sig: Optional[S.Signature] = None, opaque_nu: bool = False) -> TType:
    """Type translation; ``nu`` types map to their inductive image unless ``opaque_nu``."""
    match a:
        case S.TConst(n):
            return Base(n)
        case S.TVar(n):
            return TyVar(n)
        case S.Arrow(b, c):
            return Times(Fun(cps_type(b, sig, opaque_nu), R), cps_type(c, sig, opaque_nu))
        case S.Top():
            return ZERO
        case S.Prod(l, r):
            return Plus(cps_type(l, sig, opaque_nu), cps_type(r, sig, opaque_nu))
        case S.Bot():
            return ONE
        case S.Disj(l, r):
            return Times(cps_type(l, sig, opaque_nu), cps_type(r, sig, opaque_nu))
        case S.NuRef(n):
            if opaque_nu or sig is None or n not in sig.nus:
                return Base(n)
            decl = sig.nus[n]
            return Ind(n, decl.var, cps_type(decl.body, sig, opaque_nu))
    raise TypeError(f"not a type: {a!r}")


# ---------------------------------------------------------------- target terms


class TTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return show_tterm(self)


@dataclass(frozen=True)
class TmVar(TTerm):
    name: str


@dataclass(frozen=True)
class TmConst(TTerm):
    name: str
    ty: TType


@dataclass(frozen=True)
class TmLam(TTerm):
    var: str
    ty: TType
    body: TTerm


@dataclass(frozen=True)
class TmApp(TTerm):
    fn: TTerm
    arg: TTerm


@dataclass(frozen=True)
class TmUnit(TTerm):
    pass


@dataclass(frozen=True)
class TmPair(TTerm):
    left: TTerm
    right: TTerm


@dataclass(frozen=True)
class TmProj(TTerm):
    index: int
    body: TTerm


@dataclass(frozen=True)
class TmInj(TTerm):
    index: int
    ty: TType  # the sum type
    body: TTerm


@dataclass(frozen=True)
class TmCase(TTerm):
    scrut: TTerm
    x1: str
    b1: TTerm
    x2: str
    b2: TTerm


@dataclass(frozen=True)
class TmAbsurd(TTerm):
    ty: TType
    body: TTerm


TUNIT = TmUnit()


def show_tterm(t: TTerm, prec: int = 0) -> str:
    match t:
        case TmVar(n) | TmConst(n, _):
            return n
        case TmUnit():
            return "<>"
        case TmPair(l, r):
            return f"<{show_tterm(l)}, {show_tterm(r)}>"
        case TmCase(s, x1, b1, x2, b2):
            return f"case({show_tterm(s)}; {x1}. {show_tterm(b1)}; {x2}. {show_tterm(b2)})"
        case TmAbsurd(_, b):
            return f"absurd({show_tterm(b)})"
        case TmLam(x, ty, b):
            s, p = f"\\{x}:{show_ttype(ty)}. {show_tterm(b)}", 0
        case TmApp(f, a):
            s, p = f"{show_tterm(f, 1)} {show_tterm(a, 2)}", 1
        case TmProj(j, b):
            s, p = f"pi{j} {show_tterm(b, 2)}", 1
        case TmInj(j, _, b):
            s, p = f"in{j} {show_tterm(b, 2)}", 1
    return f"({s})" if prec > p else s


def tchildren(t: TTerm) -> tuple[TTerm, ...]:
    match t:
        case TmLam(_, _, b) | TmProj(_, b) | TmInj(_, _, b) | TmAbsurd(_, b):
            return (b,)
        case TmApp(f, a):
            return (f, a)
        case TmPair(l, r):
            return (l, r)
        case TmCase(s, _, b1, _, b2):
            return (s, b1, b2)
    return ()


def tfv(t: TTerm) -> frozenset[str]:
    match t:
        case TmVar(n):
            return frozenset([n])
        case TmLam(x, _, b):
            return tfv(b) - {x}
        case TmCase(s, x1, b1, x2, b2):
            return tfv(s) | (tfv(b1) - {x1}) | (tfv(b2) - {x2})
    out: frozenset[str] = frozenset()
    for c in tchildren(t):
        out |= tfv(c)
    return out


def tnames(t: TTerm) -> set[str]:
    out = set(tfv(t))
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, TmLam):
            out.add(u.var)
        elif isinstance(u, TmCase):
            out.update((u.x1, u.x2))
        stack.extend(tchildren(u))
    return out


def tsubst(t: TTerm, x: str, s: TTerm) -> TTerm:
    """Capture-avoiding ``t[x := s]``."""
    if x not in tfv(t):
        return t
    sfv = tfv(s)
    match t:
        case TmVar(n):
            return s if n == x else t
        case TmLam(y, ty, b):
            if y in sfv:
                y2 = fresh(y, tnames(b) | tnames(s) | {x})
                b, y = tsubst(b, y, TmVar(y2)), y2
            return TmLam(y, ty, tsubst(b, x, s))
        case TmCase(sc, x1, b1, x2, b2):
            sc = tsubst(sc, x, s)
            if x1 != x:
                if x1 in sfv:
                    n1 = fresh(x1, tnames(b1) | tnames(s) | {x})
                    b1, x1 = tsubst(b1, x1, TmVar(n1)), n1
                b1 = tsubst(b1, x, s)
            if x2 != x:
                if x2 in sfv:
                    n2 = fresh(x2, tnames(b2) | tnames(s) | {x})
                    b2, x2 = tsubst(b2, x2, TmVar(n2)), n2
                b2 = tsubst(b2, x, s)
            return TmCase(sc, x1, b1, x2, b2)
        case TmApp(f, a):
            return TmApp(tsubst(f, x, s), tsubst(a, x, s))
        case TmPair(l, r):
            return TmPair(tsubst(l, x, s), tsubst(r, x, s))
        case TmProj(j, b):
            return TmProj(j, tsubst(b, x, s))
        case TmInj(j, ty, b):
            return TmInj(j, ty, tsubst(b, x, s))
        case TmAbsurd(ty, b):
            return TmAbsurd(ty, tsubst(b, x, s))
    return t


class TargetTypeError(TypeError):
    pass


def ttype_of(t: TTerm, env: Mapping[str, TType]) -> TType:
    """Type of a target term; raises :class:`TargetTypeError` when ill-typed."""
    match t:
        case TmVar(n):
            if n not in env:
                raise TargetTypeError(f"unbound {n}")
            return env[n]
        case TmConst(_, ty):
            return ty
        case TmUnit():
            return ONE
        case TmLam(x, ty, b):
            return Fun(ty, ttype_of(b, {**env, x: ty}))
        case TmApp(f, a):
            ft = ttype_of(f, env)
            if not isinstance(ft, Fun) or ttype_of(a, env) != ft.dom:
                raise TargetTypeError(f"bad application {show_tterm(t)}")
            return ft.cod
        case TmPair(l, r):
            return Times(ttype_of(l, env), ttype_of(r, env))
        case TmProj(j, b):
            bt = ttype_of(b, env)
            if not isinstance(bt, Times):
                raise TargetTypeError(f"bad projection {show_tterm(t)}")
            return bt.left if j == 1 else bt.right
        case TmInj(j, ty, b):
            if not isinstance(ty, Plus):
                raise TargetTypeError("injection into a non-sum")
            if ttype_of(b, env) != (ty.left if j == 1 else ty.right):
                raise TargetTypeError(f"bad injection {show_tterm(t)}")
            return ty
        case TmCase(s, x1, b1, x2, b2):
            st = ttype_of(s, env)
            if not isinstance(st, Plus):
                raise TargetTypeError(f"case on non-sum {show_tterm(t)}")
            t1 = ttype_of(b1, {**env, x1: st.left})
            t2 = ttype_of(b2, {**env, x2: st.right})
            if t1 != t2:
                raise TargetTypeError("case branches disagree")
            return t1
        case TmAbsurd(ty, b):
            if ttype_of(b, env) != ZERO:
                raise TargetTypeError("absurd of a non-empty term")
            return ty
    raise TargetTypeError(f"unknown target term {t!r}")


# ---------------------------------------------------------------- translation


CPREFIX = "$"


class Translator:
    """Pinned call-by-name translation; returns target term and source type."""

    def __init__(self, sig: S.Signature, opaque_nu: bool = True):
        self.sig = sig
        self.opaque_nu = opaque_nu
        self.count = 0

    def ty(self, a: S.Type) -> TType:
        return cps_type(a, self.sig, self.opaque_nu)

    def name(self, base: str) -> str:
        self.count += 1
        return f"%{base}{self.count}"

    def tr(self, m: S.Term, g: dict, d: dict) -> tuple[TTerm, S.Type]:
        match m:
            case S.Var(x):
                if x not in g:
                    raise TargetTypeError(f"unbound variable {x}")
                return TmVar(x), g[x]
            case S.Const(c):
                a = self.sig.consts[c]
                return TmConst(c, Fun(self.ty(a), R)), a
            case S.Unit():
                k = self.name("k")
                return TmLam(k, ZERO, TmAbsurd(R, TmVar(k))), S.TOP
            case S.Lam(x, b, body):
                tb, a = self.tr(body, {**g, x: b}, d)
                arrow = S.Arrow(b, a)
                k = self.name("k")
                inner = TmLam(x, Fun(self.ty(b), R), TmApp(tb, TmProj(2, TmVar(k))))
                return TmLam(k, self.ty(arrow), TmApp(inner, TmProj(1, TmVar(k)))), arrow
            case S.App(f, a):
                tf, ft = self.tr(f, g, d)
                ta, _ = self.tr(a, g, d)
                if not isinstance(ft, S.Arrow):
                    raise TargetTypeError("application of a non-function")
                k = self.name("k")
                return TmLam(k, self.ty(ft.cod), TmApp(tf, TmPair(ta, TmVar(k)))), ft.cod
            case S.Pair(l, r):
                tl, lt = self.tr(l, g, d)
                trr, rt = self.tr(r, g, d)
                k, k1, k2 = self.name("k"), self.name("k"), self.name("k")
                prod = S.Prod(lt, rt)
                body = TmCase(TmVar(k), k1, TmApp(tl, TmVar(k1)), k2, TmApp(trr, TmVar(k2)))
                return TmLam(k, self.ty(prod), body), prod
            case S.Proj(j, body):
                tb, bt = self.tr(body, g, d)
                if not isinstance(bt, S.Prod):
                    raise TargetTypeError("projection of a non-product")
                comp = bt.left if j == 1 else bt.right
                k = self.name("k")
                return TmLam(k, self.ty(comp),
                             TmApp(tb, TmInj(j, self.ty(bt), TmVar(k)))), comp
            case S.Mu(a, t, body):
                tb, _ = self.tr(body, g, {**d, a: t})
                return TmLam(CPREFIX + a, self.ty(t), TmApp(tb, TUNIT)), t
            case S.Named(a, body):
                tb, _ = self.tr(body, g, d)
                u = self.name("u")
                return TmLam(u, ONE, TmApp(tb, TmVar(CPREFIX + a))), S.BOT
            case S.MuPair(a1, t1, a2, t2, body):
                tb, _ = self.tr(body, g, {**d, a1: t1, a2: t2})
                p = self.name("p")
                disj = S.Disj(t1, t2)
                inner = TmLam(CPREFIX + a1, self.ty(t1),
                              TmLam(CPREFIX + a2, self.ty(t2), TmApp(tb, TUNIT)))
                return TmLam(p, self.ty(disj),
                             TmApp(TmApp(inner, TmProj(1, TmVar(p))), TmProj(2, TmVar(p)))), disj
            case S.NamedPair(a1, a2, body):
                tb, _ = self.tr(body, g, d)
                u = self.name("u")
                return TmLam(u, ONE, TmApp(tb, TmPair(TmVar(CPREFIX + a1),
                                                      TmVar(CPREFIX + a2)))), S.BOT
        if isinstance(m, (S.Unfold, S.Destr, S.Observe)):
            raise FragmentError("coinductive construct outside the oracle fragment")
        raise FragmentError(f"cannot translate {type(m).__name__}; elaborate first")


def cps_env(gamma: Mapping[str, S.Type], delta: Mapping[str, S.Type],
            sig: S.Signature, opaque_nu: bool = True) -> dict[str, TType]:
    env: dict[str, TType] = {}
    for x, b in gamma.items():
        env[x] = Fun(cps_type(b, sig, opaque_nu), R)
    for a, t in delta.items():
        env[CPREFIX + a] = cps_type(t, sig, opaque_nu)
    return env


def cps_term(gamma: Mapping[str, S.Type], m: S.Term, delta: Mapping[str, S.Type],
             sig: Optional[S.Signature] = None) -> tuple[TTerm, S.Type]:
    """Translate ``gamma |- m : A | delta``; the result has type ``[[A]] -> R``."""
    sig = sig or S.Signature()
    if contains_coinductive(m):
        raise FragmentError("coinductive construct outside the oracle fragment")
    return Translator(sig).tr(m, dict(gamma), dict(delta))


# ---------------------------------------------------------------- normalizer


def is_empty(t: TType) -> bool:
    match t:
        case Zero():
            return True
        case Times(l, r):
            return is_empty(l) or is_empty(r)
        case Plus(l, r):
            return is_empty(l) and is_empty(r)
        case Fun(d, c):
            return is_singleton(d) and is_empty(c)
    return False


def is_singleton(t: TType) -> bool:
    match t:
        case One():
            return True
        case Fun(d, c):
            return is_empty(d) or is_singleton(c)
        case Times(l, r):
            return is_singleton(l) and is_singleton(r)
    return False


def canon(t: TType) -> TTerm:
    """The unique normal inhabitant of a singleton type."""
    match t:
        case One():
            return TUNIT
        case Times(l, r):
            return TmPair(canon(l), canon(r))
        case Fun(d, c):
            if is_empty(d):
                return TmLam("%e", d, TmAbsurd(c, eliminate(TmVar("%e"), d)))
            return TmLam("%e", d, canon(c))
    raise ValueError(f"{show_ttype(t)} is not a singleton")


def eliminate(x: TTerm, t: TType) -> TTerm:
    """A term of type ``Empty`` built from ``x : t`` with ``t`` empty."""
    match t:
        case Zero():
            return x
        case Times(l, r):
            return eliminate(TmProj(1, x), l) if is_empty(l) else eliminate(TmProj(2, x), r)
        case Plus(l, r):
            return TmCase(x, "%l", eliminate(TmVar("%l"), l), "%r", eliminate(TmVar("%r"), r))
        case Fun(d, c):
            return eliminate(TmApp(x, canon(d)), c)
    raise ValueError(f"{show_ttype(t)} is not empty")


class NormalizationLimit(RuntimeError):
    pass


class TargetNormalizer:
    def __init__(self, limit: int = 200_000):
        self.limit = limit
        self.work = 0

    def tick(self):
        self.work += 1
        if self.work > self.limit:
            raise NormalizationLimit("target normalization budget exhausted")

    def norm(self, t: TTerm, env: dict[str, TType]) -> TTerm:
        self.tick()
        ty = ttype_of(t, env)
        if is_singleton(ty):
            return canon(ty)
        for x, xt in env.items():
            if is_empty(xt) and x in tfv(t) or is_empty(xt) and _visible_empty(x, env):
                return TmAbsurd(ty, eliminate(TmVar(x), xt))
        t = self.whnf(t, env)
        match t:
            case TmLam(x, a, b):
                if x in env:
                    x2 = fresh(x, set(env) | tnames(b))
                    b, x = tsubst(b, x, TmVar(x2)), x2
                b = self.norm(b, {**env, x: a})
                if isinstance(b, TmApp) and b.arg == TmVar(x) and x not in tfv(b.fn):
                    return b.fn
                return TmLam(x, a, b)
            case TmPair(l, r):
                l, r = self.norm(l, env), self.norm(r, env)
                if (isinstance(l, TmProj) and isinstance(r, TmProj) and l.index == 1
                        and r.index == 2 and talpha_eq(l.body, r.body)):
                    return l.body
                return TmPair(l, r)
            case TmInj(j, st, b):
                return TmInj(j, st, self.norm(b, env))
            case TmCase(s, x1, b1, x2, b2):
                s = self.norm(s, env)
                st = ttype_of(s, env)
                if x1 in env or x1 in tnames(s):
                    n1 = fresh(x1, set(env) | tnames(b1) | tnames(s))
                    b1, x1 = tsubst(b1, x1, TmVar(n1)), n1
                if x2 in env or x2 in tnames(s):
                    n2 = fresh(x2, set(env) | tnames(b2) | tnames(s))
                    b2, x2 = tsubst(b2, x2, TmVar(n2)), n2
                if not isinstance(s, (TmInj, TmCase, TmAbsurd)):
                    # inside a branch the scrutinee is known to be an injection
                    b1 = treplace(b1, s, TmInj(1, st, TmVar(x1)))
                    b2 = treplace(b2, s, TmInj(2, st, TmVar(x2)))
                b1 = self.norm(b1, {**env, x1: st.left})
                b2 = self.norm(b2, {**env, x2: st.right})
                # a summand with no inhabitants contributes nothing
                if is_empty(st.right) and x1 not in tfv(b1):
                    return b1
                if is_empty(st.left) and x2 not in tfv(b2):
                    return b2
                eta =sum_eta(s, x1, b1, x2, b2, set(env))
                if eta is not None:
                    return eta
                return TmCase(s, x1, b1, x2, b2)
            case TmAbsurd(a, b):
                return TmAbsurd(a, self.neutral(b, env))
        return self.neutral(t, env)

    def neutral(self, t: TTerm, env) -> TTerm:
        match t:
            case TmApp(f, a):
                return TmApp(self.neutral(f, env), self.norm(a, env))
            case TmProj(j, b):
                return TmProj(j, self.neutral(b, env))
            case TmCase() | TmAbsurd() | TmLam() | TmPair() | TmInj():
                return self.norm(t, env)
        return t

    def whnf(self, t: TTerm, env) -> TTerm:
        while True:
            self.tick()
            match t:
                case TmApp(f, a):
                    f2 = self.whnf(f, env)
                    match f2:
                        case TmLam(x, _, b):
                            t = tsubst(b, x, a)
                            continue
                        case TmCase(s, x1, b1, x2, b2):
                            x1, b1 = _avoid(x1, b1, tfv(a))
                            x2, b2 = _avoid(x2, b2, tfv(a))
                            return TmCase(s, x1, TmApp(b1, a), x2, TmApp(b2, a))
                        case TmAbsurd(ty, e):
                            return TmAbsurd(ty.cod, e)
                    return TmApp(f2, a)
                case TmProj(j, p):
                    p2 = self.whnf(p, env)
                    match p2:
                        case TmPair(l, r):
                            t = l if j == 1 else r
                            continue
                        case TmCase(s, x1, b1, x2, b2):
                            return TmCase(s, x1, TmProj(j, b1), x2, TmProj(j, b2))
                        case TmAbsurd(ty, e):
                            return TmAbsurd(ty.left if j == 1 else ty.right, e)
                    return TmProj(j, p2)
                case TmCase(s, x1, b1, x2, b2):
                    s2 = self.whnf(s, env)
                    match s2:
                        case TmInj(j, _, v):
                            t = tsubst(b1, x1, v) if j == 1 else tsubst(b2, x2, v)
                            continue
                        case TmCase(s3, y1, c1, y2, c2):
                            outer_fv = tfv(TmCase(TmUnit(), x1, b1, x2, b2))
                            y1, c1 = _avoid(y1, c1, outer_fv)
                            y2, c2 = _avoid(y2, c2, outer_fv)
                            return TmCase(s3, y1, TmCase(c1, x1, b1, x2, b2),
                                          y2, TmCase(c2, x1, b1, x2, b2))
                        case TmAbsurd(_, e):
                            st = ttype_of(s2, env)
                            return TmAbsurd(ttype_of(b1, {**env, x1: st.left}), e)
                    return TmCase(s2, x1, b1, x2, b2)
                case TmAbsurd(ty, e):
                    e2 = self.whnf(e, env)
                    if isinstance(e2, TmAbsurd):
                        return TmAbsurd(ty, e2.body)
                    return TmAbsurd(ty, e2)
            return t


def treplace(t: TTerm, s: TTerm, r: TTerm, bound: frozenset = frozenset()) -> TTerm:
    """Replace occurrences of ``s`` in ``t`` by ``r`` (where no free name of ``s`` is bound)."""
    if not (tfv(s) & bound) and type(t) is type(s) and _taeq(t, s, {}, {}, 0) \
            and not isinstance(t, TmAbsurd):
        return r
    match t:
        case TmLam(x, ty, b):
            return TmLam(x, ty, treplace(b, s, r, bound | {x}))
        case TmCase(sc, x1, b1, x2, b2):
            return TmCase(treplace(sc, s, r, bound), x1, treplace(b1, s, r, bound | {x1}),
                          x2, treplace(b2, s, r, bound | {x2}))
        case TmApp(f, a):
            return TmApp(treplace(f, s, r, bound), treplace(a, s, r, bound))
        case TmPair(lt, rt):
            return TmPair(treplace(lt, s, r, bound), treplace(rt, s, r, bound))
        case TmProj(j, b):
            return TmProj(j, treplace(b, s, r, bound))
        case TmInj(j, ty, b):
            return TmInj(j, ty, treplace(b, s, r, bound))
        case TmAbsurd(ty, b):
            return TmAbsurd(ty, treplace(b, s, r, bound))
    return t


def _visible_empty(x, env) -> bool:
    # an empty-typed variable in scope makes every term equal
    return True


def _avoid(x: str, body: TTerm, bad: frozenset[str]) -> tuple[str, TTerm]:
    if x not in bad:
        return x, body
    x2 = fresh(x, tnames(body) | set(bad))
    return x2, tsubst(body, x, TmVar(x2))


def sum_eta(s: TTerm, x1: str, b1: TTerm, x2: str, b2: TTerm, avoid: set[str]) -> Optional[TTerm]:
    """``case(s; x1. t[in1 x1]; x2. t[in2 x2])`` to ``t[s]`` by anti-unification."""
    z = fresh("%z", avoid | tnames(b1) | tnames(b2) | tnames(s))
    tmpl = _antiunify(b1, b2, x1, x2, z, {}, {})
    if tmpl is None:
        return None
    free = tfv(tmpl)
    if x1 in free or x2 in free:
        return None
    return tsubst(tmpl, z, s)


def _antiunify(t1, t2, x1, x2, z, m1, m2) -> Optional[TTerm]:
    if (isinstance(t1, TmInj) and isinstance(t2, TmInj) and t1.index == 1 and t2.index == 2
            and t1.body == TmVar(x1) and t2.body == TmVar(x2)
            and x1 not in m1 and x2 not in m2):
        return TmVar(z)
    if type(t1) is not type(t2):
        return None
    match t1:
        case TmVar(n):
            a, b = m1.get(n), m2.get(t2.name)
            if a is None and b is None:
                return t1 if n == t2.name else None
            return t1 if a == b and a is not None else None
        case TmConst(n, ty):
            return t1 if t1 == t2 else None
        case TmUnit():
            return t1
        case TmLam(x, ty, b):
            if ty != t2.ty:
                return None
            key = ("lam", len(m1))
            r = _antiunify(b, t2.body, x1, x2, z, {**m1, x: key}, {**m2, t2.var: key})
            return None if r is None else TmLam(x, ty, r)
        case TmCase(s, y1, c1, y2, c2):
            rs = _antiunify(s, t2.scrut, x1, x2, z, m1, m2)
            k1, k2 = ("c1", len(m1)), ("c2", len(m1))
            r1 = _antiunify(c1, t2.b1, x1, x2, z, {**m1, y1: k1}, {**m2, t2.x1: k1})
            r2 = _antiunify(c2, t2.b2, x1, x2, z, {**m1, y2: k2}, {**m2, t2.x2: k2})
            if rs is None or r1 is None or r2 is None:
                return None
            return TmCase(rs, y1, r1, y2, r2)
        case TmInj(j, ty, b):
            if j != t2.index or ty != t2.ty:
                return None
            r = _antiunify(b, t2.body, x1, x2, z, m1, m2)
            return None if r is None else TmInj(j, ty, r)
        case TmProj(j, b):
            if j != t2.index:
                return None
            r = _antiunify(b, t2.body, x1, x2, z, m1, m2)
            return None if r is None else TmProj(j, r)
        case TmAbsurd(ty, b):
            if ty != t2.ty:
                return None
            r = _antiunify(b, t2.body, x1, x2, z, m1, m2)
            return None if r is None else TmAbsurd(ty, r)
        case TmApp(f, a):
            rf = _antiunify(f, t2.fn, x1, x2, z, m1, m2)
            ra = _antiunify(a, t2.arg, x1, x2, z, m1, m2)
            return None if rf is None or ra is None else TmApp(rf, ra)
        case TmPair(l, r):
            rl = _antiunify(l, t2.left, x1, x2, z, m1, m2)
            rr = _antiunify(r, t2.right, x1, x2, z, m1, m2)
            return None if rl is None or rr is None else TmPair(rl, rr)
    return None


def talpha_eq(t1: TTerm, t2: TTerm) -> bool:
    """Alpha-equivalence; all terms of the form ``absurd(e)`` at one type are identified."""
    return _taeq(t1, t2, {}, {}, 0)


def _taeq(t1, t2, m1, m2, depth) -> bool:
    if type(t1) is not type(t2):
        return False
    match t1:
        case TmVar(n):
            a, b = m1.get(n), m2.get(t2.name)
            if a is None and b is None:
                return n == t2.name
            return a == b
        case TmLam(x, ty, b):
            return ty == t2.ty and _taeq(b, t2.body, {**m1, x: depth}, {**m2, t2.var: depth},
                                         depth + 1)
        case TmCase(s, y1, c1, y2, c2):
            return (_taeq(s, t2.scrut, m1, m2, depth)
                    and _taeq(c1, t2.b1, {**m1, y1: depth}, {**m2, t2.x1: depth}, depth + 1)
                    and _taeq(c2, t2.b2, {**m1, y2: depth}, {**m2, t2.x2: depth}, depth + 1))
        case TmAbsurd(ty, _):
            return ty == t2.ty
        case TmInj(j, ty, b):
            return j == t2.index and ty == t2.ty and _taeq(b, t2.body, m1, m2, depth)
        case TmProj(j, b):
            return j == t2.index and _taeq(b, t2.body, m1, m2, depth)
        case TmApp() | TmPair():
            return all(_taeq(a, b, m1, m2, depth) for a, b in zip(tchildren(t1), tchildren(t2)))
    return t1 == t2


class TargetComparer:
    """Type-directed comparison of target normal forms (eta for arrows, products,
    singletons; proof-irrelevant ``absurd``)."""

    def __init__(self, normalizer: "TargetNormalizer"):
        self.n = normalizer

    def eq(self, t1: TTerm, t2: TTerm, ty: TType, env: dict) -> bool:
        if is_singleton(ty) or any(is_empty(v) for v in env.values()):
            return True
        t1, t2 = self.n.norm(t1, env), self.n.norm(t2, env)
        if talpha_eq(t1, t2):
            return True
        split = self._splittable(t1, env) or self._splittable(t2, env)
        if split is not None and not isinstance(ty, (Fun, Times)):
            # sum-eta: decide both sides under each injection of the scrutinee
            st = ttype_of(split, env)
            y = fresh("%y", set(env) | tnames(t1) | tnames(t2))
            return all(self.eq(treplace(t1, split, TmInj(j, st, TmVar(y))),
                               treplace(t2, split, TmInj(j, st, TmVar(y))),
                               ty, {**env, y: comp})
                       for j, comp in ((1, st.left), (2, st.right)))
        match ty:
            case Fun(a, b):
                x = fresh("%x", set(env) | tnames(t1) | tnames(t2))
                return self.eq(TmApp(t1, TmVar(x)), TmApp(t2, TmVar(x)), b, {**env, x: a})
            case Times(l, r):
                return (self.eq(TmProj(1, t1), TmProj(1, t2), l, env)
                        and self.eq(TmProj(2, t1), TmProj(2, t2), r, env))
        return self.head(t1, t2, ty, env)

    @staticmethod
    def _splittable(t: TTerm, env) -> Optional[TTerm]:
        if isinstance(t, TmCase) and tfv(t.scrut) <= set(env) \
                and not isinstance(t.scrut, (TmInj, TmCase, TmAbsurd)):
            return t.scrut
        return None

    def head(self, t1, t2, ty, env) -> bool:
        if type(t1) is not type(t2):
            return False
        match t1:
            case TmAbsurd():
                return True
            case TmInj(j, st, b):
                return (j == t2.index and st == t2.ty
                        and self.eq(b, t2.body, st.left if j == 1 else st.right, env))
            case TmCase(s, x1, b1, x2, b2):
                st = self.spine(s, t2.scrut, env)
                if not isinstance(st, Plus):
                    return False
                y = fresh("%y", set(env) | tnames(t1) | tnames(t2))
                return (self.eq(tsubst(b1, x1, TmVar(y)), tsubst(t2.b1, t2.x1, TmVar(y)),
                                ty, {**env, y: st.left})
                        and self.eq(tsubst(b2, x2, TmVar(y)), tsubst(t2.b2, t2.x2, TmVar(y)),
                                    ty, {**env, y: st.right}))
        return self.spine(t1, t2, env) is not None

    def spine(self, t1, t2, env) -> Optional[TType]:
        match t1, t2:
            case TmVar(x), TmVar(y):
                return env.get(x) if x == y else None
            case TmConst(c, ty), TmConst(c2, _):
                return ty if c == c2 else None
            case TmApp(f, a), TmApp(f2, a2):
                ft = self.spine(f, f2, env)
                if isinstance(ft, Fun) and self.eq(a, a2, ft.dom, env):
                    return ft.cod
                return None
            case TmProj(j, b), TmProj(j2, b2):
                bt = self.spine(b, b2, env)
                if j == j2 and isinstance(bt, Times):
                    return bt.left if j == 1 else bt.right
                return None
        return None


def target_equal(t1: TTerm, t2: TTerm, env: Optional[Mapping[str, TType]] = None,
                 limit: int = 200_000) -> bool:
    """Beta-eta equality of two target terms of the same type."""
    env = dict(env or {})
    ty = ttype_of(t1, env)
    return TargetComparer(TargetNormalizer(limit)).eq(t1, t2, ty, env)


def target_normalize(t: TTerm, env: Optional[Mapping[str, TType]] = None) -> TTerm:
    return TargetNormalizer().norm(t, dict(env or {}))


# ---------------------------------------------------------------- oracle


def cps_equiv(m: S.Term, n: S.Term, sig: Optional[S.Signature] = None,
              gamma: Optional[Mapping[str, S.Type]] = None,
              delta: Optional[Mapping[str, S.Type]] = None) -> Verdict:
    """Compare target normal forms: equal iff alpha-equal, otherwise distinct."""
    sig = sig or S.Signature()
    gamma, delta = dict(gamma or {}), dict(delta or {})
    tm, am = cps_term(gamma, m, delta, sig)
    tn, an = cps_term(gamma, n, delta, sig)
    if am != an:
        raise TargetTypeError("oracle sides have different types")
    env = cps_env(gamma, delta, sig)
    try:
        nm = target_normalize(tm, env)
        nn = target_normalize(tn, env)
    except NormalizationLimit:
        return Verdict(UNKNOWN, "target normalization budget exhausted")
    try:
        same = talpha_eq(nm, nn) or TargetComparer(TargetNormalizer()).eq(
            nm, nn, ttype_of(nm, env), env)
    except NormalizationLimit:
        return Verdict(UNKNOWN, "target normalization budget exhausted")
    if same:
        return Verdict(EQUAL, "cps normal forms coincide")
    return Verdict(DISTINCT, "cps normal forms differ",
                   witness=f"{show_tterm(nm)}  vs  {show_tterm(nn)}")


def extract_core(m: S.Term, n: S.Term, sig: S.Signature, gamma: Mapping[str, S.Type]):
    """Abstract ``unfold`` subterms and ``out`` into fresh variables.

    Returns ``(m', n', gamma')`` or ``None`` when an ``unfold`` mentions a
    locally bound variable.
    """
    from mucalc.syntax.subst import alpha_eq
    g = dict(gamma)
    table: list[tuple[S.Term, str]] = []
    used = set(g)
    for t in (m, n):
        for s in subterms(t):
            used |= s.fv | s.fcv

    def var_for_unfold(u: S.Unfold) -> str:
        for t, v in table:
            if alpha_eq(t, u):
                return v
        v = fresh("unfold_", used)
        used.add(v)
        table.append((u, v))
        g[v] = S.Arrow(u.carrier, S.NuRef(u.nu))
        return v

    def out_var(nu: str) -> str:
        v = f"out_{nu}"
        if v not in g:
            g[v] = S.Arrow(S.NuRef(nu), sig.nus[nu].instantiate(S.NuRef(nu)))
        return v

    class _Bail(Exception):
        pass

    def go(t: S.Term, bound: frozenset, cbound: frozenset) -> S.Term:
        from mucalc.syntax.subst import _rebuild
        from mucalc.syntax.names import children
        match t:
            case S.Unfold():
                if t.fv & bound or t.fcv & cbound or t.carrier is None:
                    raise _Bail()
                return S.Var(var_for_unfold(t))
            case S.Destr(nu, b):
                return S.App(S.Var(out_var(nu)), go(b, bound, cbound))
            case S.Lam(x, ty, b):
                return S.Lam(x, ty, go(b, bound | {x}, cbound))
            case S.Mu(a, ty, b):
                return S.Mu(a, ty, go(b, bound, cbound | {a}))
            case S.MuPair(a1, t1, a2, t2, b):
                return S.MuPair(a1, t1, a2, t2, go(b, bound, cbound | {a1, a2}))
        return _rebuild(t, [go(c, bound, cbound) for c in children(t)])

    try:
        return go(m, frozenset(), frozenset()), go(n, frozenset(), frozenset()), g
    except _Bail:
        return None


def oracle(m: S.Term, n: S.Term, sig: S.Signature, gamma: Mapping[str, S.Type],
           delta: Mapping[str, S.Type]) -> Verdict:
    """CPS verdict, going through core extraction for coinductive terms."""
    if contains_coinductive(m) or contains_coinductive(n):
        core = extract_core(m, n, sig, gamma)
        if core is None:
            return Verdict(UNKNOWN, "no coinductive-free core")
        m2, n2, g2 = core
        v = cps_equiv(m2, n2, sig, g2, delta)
        abstracted = set(g2) - set(gamma)
        if v.outcome == DISTINCT and (m2.fv & abstracted) != (n2.fv & abstracted):
            # Different unfold terms became unrelated variables; their
            # distinctness in the generic core says nothing about the instance.
            return Verdict(UNKNOWN, "sides abstract different coinductive subterms")
        v.reason += " (on extracted coinductive-free core)"
        return v
    return cps_equiv(m, n, sig, gamma, delta)


def describe(m: S.Term, sig: Optional[S.Signature] = None,
             gamma: Optional[Mapping[str, S.Type]] = None,
             delta: Optional[Mapping[str, S.Type]] = None) -> tuple[str, str, str]:
    """Pretty source, translated term and its normal form."""
    sig = sig or S.Signature()
    t, _ = cps_term(gamma or {}, m, delta or {}, sig)
    nf = target_normalize(t, cps_env(gamma or {}, delta or {}, sig))
    return pretty(m), show_tterm(t), show_tterm(nf)
