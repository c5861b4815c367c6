"""Oriented rewriting for the equational theory and a three-valued equivalence check.

Rules are the equality axioms read left to right, plus the computation rule
for ``unfold``. Normalization is normal order with a fuel bound; equivalence
normalizes both sides and then compares them by type-directed eta-long
conversion (which also absorbs the ``Top`` axiom). A ``distinct`` verdict is
only issued when the CPS oracle agrees.
"""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from typing import Mapping, Optional

from mucalc.functor import fmap_at
from mucalc.syntax.ast import (
    App, Arrow, Bot, Const, Destr, Disj, Lam, Mu, MuPair, Named, NamedPair, NuRef,
    Pair, Prod, Proj, Signature, Term, Top, TConst, TVar, Type, Unfold, Unit, Var, BOT,
    HOLE,
)
from mucalc.syntax.names import all_names, children, fresh
from mucalc.syntax.subst import _rebuild, alpha_eq, rename_cvar, struct_subst, subst_term
from mucalc.verdict import DISTINCT, EQUAL, UNKNOWN, Step, Verdict

sys.setrecursionlimit(max(sys.getrecursionlimit(), 50_000))

DEFAULT_FUEL = 10_000


def default_fuel() -> int:
    try:
        return int(os.environ.get("MUCALC_FUEL", DEFAULT_FUEL))
    except ValueError:
        return DEFAULT_FUEL


@dataclass(frozen=True)
class Rule:
    name: str
    axiom: str
    kind: str  # beta | mu-structural | eta | type-directed | coinductive


RULES: dict[str, Rule] = {r.name: r for r in [
    Rule("beta", "(\\x.M) N = M[x := N]", "beta"),
    Rule("lam-eta", "\\x.M x = M  (x not in FV(M))", "eta"),
    Rule("proj", "pi_j <M1, M2> = Mj", "beta"),
    Rule("pair-eta", "<pi1 M, pi2 M> = M", "eta"),
    Rule("top", "<> = M  (at type Top)", "type-directed"),
    Rule("rename", "[b](mu a. M) = M[a := b]", "mu-structural"),
    Rule("mu-eta", "mu a. [a] M = M  (a not in FV(M))", "mu-structural"),
    Rule("mupair-named", "[b1, b2](mu (a1, a2). M) = M[a1, a2 := b1, b2]", "mu-structural"),
    Rule("mupair-eta", "mu (a1, a2). [a1, a2] M = M  (a1, a2 not in FV(M))", "eta"),
    Rule("bot", "[b] M = M  (b : Bot)", "mu-structural"),
    Rule("mu-app", "(mu a. M) N = mu b. M[a* := [b](- N)]", "mu-structural"),
    Rule("mu-proj", "pi_j (mu a. M) = mu b. M[a* := [b](pi_j -)]", "mu-structural"),
    Rule("namedpair-mu", "[a1, a2](mu a. M) = M[a* := [a1, a2] -]", "mu-structural"),
    # derived / extension rules
    Rule("mu-bot", "mu b:Bot. M = M  (b not in FV(M))", "mu-structural"),
    Rule("unfold", "out (unfold F M) = map_G(unfold F)(F M)", "coinductive"),
    Rule("named-mupair", "[b](mu (a1, a2). M) = M  (a1, a2 not in FV(M))", "mu-structural"),
    Rule("destr-mu", "out (mu a. M) = mu b. M[a* := [b](out -)]", "coinductive"),
    Rule("top-eta", "\\u:Top. M <> = M  (u not in FV(M))", "eta"),
    Rule("named-vacuous-lam", "[c](\\y. M) = M  (c : ~B, y not in FV(M))", "eta"),
    Rule("split-order", "(mu a2. (mu a1. [a1,a2] M) N1) N2 = (mu a1. (mu a2. [a1,a2] M) N2) N1",
         "eta"),
]}

# the thirteen equality axioms, in the order they are usually listed
AXIOMS = ("beta", "lam-eta", "proj", "pair-eta", "top", "rename", "mu-eta",
          "mupair-named", "mupair-eta", "bot", "mu-app", "mu-proj", "namedpair-mu")


class FuelExhausted(RuntimeError):
    def __init__(self, term: Term, trace: list[Step]):
        super().__init__(f"fuel exhausted after {len(trace)} steps")
        self.term, self.trace = term, trace


def _pos(path: tuple[int, ...]) -> str:
    return ".".join(map(str, path)) or "root"


def _child_deltas(m: Term, d: Mapping[str, Type]) -> list[Mapping[str, Type]]:
    match m:
        case Mu(a, t, _):
            return [{**d, a: t}]
        case MuPair(a1, t1, a2, t2, _):
            return [{**d, a1: t1, a2: t2}]
    return [d] * len(children(m))


def _named_use(m: Term, a: str) -> bool:
    """Does ``[a] N`` occur free in ``m``?"""
    if a not in m.fcv:
        return False
    if isinstance(m, Named) and m.cvar == a:
        return True
    return any(_named_use(c, a) for c in children(m))


def _movable(body: Term, a: str) -> bool:
    """Whether an elimination may be pushed into ``mu a. body``.

    When ``a`` occurs only inside ``[a1, a2] N`` the structural substitution
    would rebuild the very same redex, so such terms are left as (stuck)
    normal forms.
    """
    return a not in body.fcv or _named_use(body, a)


def contract(m: Term, d: Mapping[str, Type], sig: Signature,
             eta: bool = False) -> Optional[tuple[str, Term]]:
    """Contract ``m`` at its root, returning ``(rule, result)`` or ``None``."""
    match m:
        case App(Lam(x, _, body), n):
            return "beta", subst_term(body, x, n)
        case App(Mu(a, Arrow(_, cod) as t, body), n) if _movable(body, a):
            b = fresh("b", all_names(body, n) | set(d))
            return "mu-app", Mu(b, cod, struct_subst(body, a, Named(b, App(HOLE, n)), t))
        case Proj(j, Pair(l, r)):
            return "proj", l if j == 1 else r
        case Proj(j, Mu(a, Prod(tl, tr) as t, body)) if _movable(body, a):
            b = fresh("b", all_names(body) | set(d))
            return "mu-proj", Mu(b, tl if j == 1 else tr,
                                 struct_subst(body, a, Named(b, Proj(j, HOLE)), t))
        case Named(b, Mu(a, _, body)):
            return "rename", rename_cvar(body, a, b)
        case Named(b, body) if isinstance(d.get(b), Bot):
            return "bot", body
        case Named(b, MuPair(a1, _, a2, _, body)) if not ({a1, a2} & body.fcv):
            return "named-mupair", body
        case NamedPair(b1, b2, MuPair(a1, _, a2, _, body)):
            fresh1 = fresh("c", all_names(body) | set(d) | {b1, b2})
            # rename through a fresh name so that a2 := b2 cannot see the a1 := b1 result
            body = rename_cvar(body, a1, fresh1)
            body = rename_cvar(body, a2, b2)
            return "mupair-named", rename_cvar(body, fresh1, b1)
        case NamedPair(a1, a2, Mu(a, t, body)) if _movable(body, a):
            return "namedpair-mu", struct_subst(body, a, NamedPair(a1, a2, HOLE), t)
        case Mu(a, _, Named(a2, body)) if a == a2 and a not in body.fcv:
            return "mu-eta", body
        case Mu(a, Bot(), body) if a not in body.fcv:
            return "mu-bot", body
        case Destr(nu, App(Unfold(nu2, carrier, coalg) as u, arg)) if nu == nu2 and carrier:
            decl = sig.nus[nu]
            return "unfold", fmap_at(decl.body, decl.var, u, carrier, NuRef(nu),
                                     App(coalg, arg), avoid=set(d))
        case Destr(nu, Mu(a, t, body)) if _movable(body, a):
            decl = sig.nus[nu]
            b = fresh("b", all_names(body) | set(d))
            return "destr-mu", Mu(b, decl.instantiate(NuRef(nu)),
                                  struct_subst(body, a, Named(b, Destr(nu, HOLE)), t))
    if eta:
        match m:
            case Lam(x, _, App(f, Var(y))) if x == y and x not in f.fv:
                return "lam-eta", f
            case Lam(x, Top(), App(f, Unit())) if x not in f.fv:
                # <> == x at Top, then lam-eta
                return "top-eta", f
            case Named(c, Lam(y, _, body)) if isinstance(d.get(c), Arrow) and \
                    isinstance(d[c].cod, Bot) and y not in body.fv:
                # [c](\y. M) == [c](mu b. M) == M, since M : Bot
                return "named-vacuous-lam", body
            case App(Mu(c2, Arrow(_, Bot()) as t2,
                        App(Mu(c1, Arrow(_, Bot()) as t1, NamedPair(n1, n2, x)), arg1)), arg2) \
                    if (n1, n2) == (c1, c2) and c1 != c2 and not ({c1, c2} & x.fcv) \
                    and c2 not in arg1.fcv and c1 not in arg2.fcv:
                # both orders of consuming [a1, a2] x are equal (mu-app through the
                # [a1, a2] clause, then bot and mu-bot); keep a1 outermost
                inner = App(Mu(c2, t2, NamedPair(n1, n2, x)), arg2)
                return "split-order", App(Mu(c1, t1, inner), arg1)
            case Pair(Proj(1, l), Proj(2, r)) if alpha_eq(l, r):
                return "pair-eta", l
            case MuPair(a1, _, a2, _, NamedPair(b1, b2, body)) \
                    if (a1, a2) == (b1, b2) and not ({a1, a2} & body.fcv):
                return "mupair-eta", body
    return None


class Normalizer:
    """Normal-order normalizer sharing one fuel budget across calls."""

    def __init__(self, sig: Optional[Signature] = None, fuel: Optional[int] = None,
                 eta: bool = False):
        self.sig = sig or Signature()
        self.fuel = default_fuel() if fuel is None else fuel
        self.eta = eta
        self.trace: list[Step] = []

    def _fire(self, rule: str, path: tuple[int, ...], current: Term):
        if len(self.trace) >= self.fuel:
            raise FuelExhausted(current, list(self.trace))
        self.trace.append(Step(rule, _pos(path)))

    def normalize(self, m: Term, delta: Optional[Mapping[str, Type]] = None) -> Term:
        return self._norm(m, dict(delta or {}), ())

    def _norm(self, m: Term, d, path) -> Term:
        while True:
            r = contract(m, d, self.sig, self.eta)
            if r is not None:
                self._fire(r[0], path, m)
                m = r[1]
                continue
            kids = children(m)
            if not kids or isinstance(m, Unfold):
                return m
            deltas = _child_deltas(m, d)
            new = list(kids)
            # the first child is the head position for every redex shape
            new[0] = self._norm(kids[0], deltas[0], path + (1,))
            m2 = _rebuild(m, new)
            r = contract(m2, d, self.sig, self.eta)
            if r is not None:
                self._fire(r[0], path, m2)
                m = r[1]
                continue
            for i in range(1, len(kids)):
                new[i] = self._norm(kids[i], deltas[i], path + (i + 1,))
            m = _rebuild(m, new)
            r = contract(m, d, self.sig, self.eta)
            if r is None:
                return m
            self._fire(r[0], path, m)
            m = r[1]


def step(m: Term, sig: Optional[Signature] = None, delta: Optional[Mapping[str, Type]] = None,
         eta: bool = False) -> Optional[Term]:
    """One leftmost-outermost contraction, or ``None`` if ``m`` is normal."""
    r = _step(m, dict(delta or {}), sig or Signature(), eta)
    return None if r is None else r[1]


def step_with_rule(m: Term, sig: Optional[Signature] = None,
                   delta: Optional[Mapping[str, Type]] = None,
                   eta: bool = False) -> Optional[tuple[Step, Term]]:
    r = _step(m, dict(delta or {}), sig or Signature(), eta)
    if r is None:
        return None
    (rule, path), t = r
    return Step(rule, _pos(path)), t


def _step(m, d, sig, eta, path=()):
    r = contract(m, d, sig, eta)
    if r is not None:
        return (r[0], path), r[1]
    if isinstance(m, Unfold):
        return None
    kids = children(m)
    for i, (k, dk) in enumerate(zip(kids, _child_deltas(m, d))):
        s = _step(k, dk, sig, eta, path + (i + 1,))
        if s is not None:
            new = list(kids)
            new[i] = s[1]
            return s[0], _rebuild(m, new)
    return None


def normalize(m: Term, fuel: Optional[int] = None, sig: Optional[Signature] = None,
              delta: Optional[Mapping[str, Type]] = None,
              eta: bool = False) -> tuple[Term, list[Step]]:
    """Normal form and trace; raises :class:`FuelExhausted` with the partial trace."""
    n = Normalizer(sig, fuel, eta)
    return n.normalize(m, delta), n.trace


# ---------------------------------------------------------------- conversion


def collapsible(t: Type) -> bool:
    """Types all of whose inhabitants are provably equal (CPS image is empty)."""
    match t:
        case Top():
            return True
        case Prod(l, r):
            return collapsible(l) and collapsible(r)
        case Arrow(_, c):
            return collapsible(c)
        case Disj(l, r):
            return collapsible(l) or collapsible(r)
    return False


def is_neutral(m: Term) -> bool:
    match m:
        case Var() | Const() | Unfold():
            return True
        case App(f, _):
            return is_neutral(f)
        case Proj(_, b) | Destr(_, b):
            return is_neutral(b)
    return False


def _expandable(m: Term) -> bool:
    """Naming a disjunction with ``[a1, a2]`` makes progress on this term."""
    return isinstance(m, MuPair) or (isinstance(m, Mu) and _movable(m.body, m.cvar))


class Converter:
    """Type-directed eta-long comparison of normal forms."""

    def __init__(self, normalizer: Normalizer):
        self.n = normalizer
        self.sig = normalizer.sig

    def _fresh(self, base: str, *terms: Term, extra=()) -> str:
        return fresh(base, all_names(*terms) | set(extra))

    def conv(self, m: Term, n: Term, t: Type, g: dict, d: dict) -> bool:
        if collapsible(t):
            return True
        m, n = self.n._norm(m, d, ()), self.n._norm(n, d, ())
        if alpha_eq(m, n):
            return True
        scope = set(g) | set(d)
        match t:
            case Arrow(b, a):
                x = self._fresh("x", m, n, extra=scope)
                return self.conv(App(m, Var(x)), App(n, Var(x)), a, {**g, x: b}, d)
            case Prod(l, r):
                return (self.conv(Proj(1, m), Proj(1, n), l, g, d)
                        and self.conv(Proj(2, m), Proj(2, n), r, g, d))
            case Disj(l, r):
                if _expandable(m) or _expandable(n):
                    a1 = self._fresh("a", m, n, extra=scope)
                    a2 = self._fresh("a", m, n, extra=scope | {a1})
                    return self.conv(NamedPair(a1, a2, m), NamedPair(a1, a2, n), BOT,
                                     g, {**d, a1: l, a2: r})
                return self.same(m, n, g, d)
            case Bot():
                return self.conv_bot(m, n, g, d)
        # base types, type variables and coinductive types
        if isinstance(m, Mu) or isinstance(n, Mu):
            a = self._fresh("a", m, n, extra=scope)
            return self.conv(Named(a, m), Named(a, n), BOT, g, {**d, a: t})
        return self.same(m, n, g, d)

    def conv_bot(self, m: Term, n: Term, g: dict, d: dict) -> bool:
        if isinstance(m, Mu) or isinstance(n, Mu):
            c = self._fresh("c", m, n, extra=set(g) | set(d))
            d2 = {**d, c: BOT}
            m = rename_cvar(m.body, m.cvar, c) if isinstance(m, Mu) else m
            n = rename_cvar(n.body, n.cvar, c) if isinstance(n, Mu) else n
            return self.conv(m, n, BOT, g, d2)
        match m, n:
            case Named(a, mb), Named(b, nb):
                return a == b and a in d and self.conv(mb, nb, d[a], g, d)
            case NamedPair(a1, a2, mb), NamedPair(b1, b2, nb):
                return ((a1, a2) == (b1, b2) and a1 in d and a2 in d
                        and self.conv(mb, nb, Disj(d[a1], d[a2]), g, d))
        return self.same(m, n, g, d)

    def same(self, m: Term, n: Term, g: dict, d: dict) -> bool:
        """Congruence on head forms that are neither introductions nor expandable."""
        if is_neutral(m) and is_neutral(n):
            return self.neutral(m, n, g, d) is not None
        if type(m) is not type(n):
            return False
        from mucalc.typecheck import infer
        match m, n:
            case App(f, a), App(f2, a2):
                if not self.same(f, f2, g, d):
                    return False
                return self.conv(a, a2, infer(g, a, d, self.sig), g, d)
            case Proj(j, b), Proj(j2, b2):
                return j == j2 and self.same(b, b2, g, d)
            case Destr(nu, b), Destr(nu2, b2):
                return nu == nu2 and self.same(b, b2, g, d)
            case NamedPair(a1, a2, b), NamedPair(c1, c2, b2):
                return (a1, a2) == (c1, c2) and self.same(b, b2, g, d)
            case Named(a, b), Named(c, b2):
                return a == c and self.same(b, b2, g, d)
            case Mu(a, t, b), Mu(c, t2, b2):
                if t != t2:
                    return False
                e = self._fresh("c", m, n, extra=set(g) | set(d))
                return self.conv(rename_cvar(b, a, e), rename_cvar(b2, c, e), BOT,
                                 g, {**d, e: t})
        return False

    def neutral(self, m: Term, n: Term, g: dict, d: dict) -> Optional[Type]:
        """Type of two equal neutral spines, or ``None`` if they differ."""
        match m, n:
            case Var(x), Var(y):
                return g.get(x) if x == y else None
            case Const(c), Const(c2):
                return self.sig.consts.get(c) if c == c2 else None
            case App(f, a), App(f2, a2):
                ft = self.neutral(f, f2, g, d)
                if isinstance(ft, Arrow) and self.conv(a, a2, ft.dom, g, d):
                    return ft.cod
                return None
            case Proj(j, b), Proj(j2, b2):
                bt = self.neutral(b, b2, g, d)
                if j == j2 and isinstance(bt, Prod):
                    return bt.left if j == 1 else bt.right
                return None
            case Destr(nu, b), Destr(nu2, b2):
                if nu == nu2 and self.neutral(b, b2, g, d) == NuRef(nu):
                    return self.sig.nus[nu].instantiate(NuRef(nu))
                return None
            case Unfold(nu, car, c), Unfold(nu2, car2, c2):
                if nu != nu2 or car != car2 or car is None:
                    return None
                ct = Arrow(car, self.sig.nus[nu].instantiate(car))
                return Arrow(car, NuRef(nu)) if self.conv(c, c2, ct, g, d) else None
        return None


def equiv(m: Term, n: Term, sig: Optional[Signature] = None,
          gamma: Optional[Mapping[str, Type]] = None,
          delta: Optional[Mapping[str, Type]] = None,
          fuel: Optional[int] = None, use_oracle: bool = True) -> Verdict:
    """Three-valued equivalence of two well-typed, elaborated terms."""
    from mucalc.typecheck import infer
    sig = sig or Signature()
    g, d = dict(gamma or {}), dict(delta or {})
    tm, tn = infer(g, m, d, sig), infer(g, n, d, sig)
    if tm != tn:
        raise ValueError("equiv: the two sides have different types")
    fuel = default_fuel() if fuel is None else fuel
    left, right = Normalizer(sig, fuel), Normalizer(sig, fuel)
    try:
        nm = left.normalize(m, d)
        nn = right.normalize(n, d)
    except FuelExhausted as exc:
        return Verdict(UNKNOWN, "fuel exhausted during normalization",
                       left.trace, right.trace)
    if alpha_eq(nm, nn):
        return Verdict(EQUAL, "normal forms are alpha-equal", left.trace, right.trace)
    comparer = Normalizer(sig, fuel)
    try:
        same = Converter(comparer).conv(nm, nn, tm, g, d)
    except FuelExhausted:
        return Verdict(UNKNOWN, "fuel exhausted during eta-long comparison",
                       left.trace, right.trace)
    if not same:
        # eta-contraction can unblock stuck [a1, a2] forms (e.g. \y. (mu a. M) y)
        try:
            em = Normalizer(sig, fuel, eta=True).normalize(nm, d)
            en = Normalizer(sig, fuel, eta=True).normalize(nn, d)
            same = alpha_eq(em, en) or Converter(Normalizer(sig, fuel, eta=True)).conv(
                em, en, tm, g, d)
        except FuelExhausted:
            pass
    if same:
        return Verdict(EQUAL, "normal forms agree up to eta and Top", left.trace, right.trace)
    if not use_oracle:
        return Verdict(UNKNOWN, "normal forms differ; oracle not consulted",
                       left.trace, right.trace)
    from mucalc import cps
    try:
        ov = cps.oracle(nm, nn, sig, g, d)
    except (cps.FragmentError, cps.TargetTypeError) as exc:
        return Verdict(UNKNOWN, f"normal forms differ; oracle unavailable ({exc})",
                       left.trace, right.trace)
    if ov.outcome == DISTINCT:
        return Verdict(DISTINCT, f"normal forms differ; {ov.reason}", left.trace,
                       right.trace, witness=ov.witness)
    if ov.outcome == EQUAL:
        return Verdict(UNKNOWN, f"normal forms differ but the oracle finds them equal "
                       f"({ov.reason})", left.trace, right.trace)
    return Verdict(UNKNOWN, f"normal forms differ; {ov.reason}", left.trace, right.trace)
