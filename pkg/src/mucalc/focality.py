"""Focal functions: the context grammar, syntactic certificates, semantic tests.

A function ``F : B -> A`` is focal when ``F (mu a. M) == mu b. M[a* := [b] F -]``
for every ``M``.  Focality is only semidecided here: :func:`certify_focal`
either produces a replayable certificate or gives up, and :func:`test_focal`
searches for counterexamples among small and random sample terms.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import islice
from typing import Mapping, Optional

from mucalc.functor import fmap
from mucalc.gen import TermGen, default_signature, enumerate_terms
from mucalc.rewrite import FuelExhausted, equiv, normalize
from mucalc.syntax.ast import (
    BOT, App, Arrow, Disj, Hole, Lam, Mu, MuPair, Named, NamedPair, Proj, Signature,
    Term, Type, Var, HOLE, dneg, neg, oplus,
)
from mucalc.syntax.elaborate import case_term, focus_term
from mucalc.syntax.names import all_names, fresh, hole_count
from mucalc.syntax.subst import alpha_eq, struct_subst, subst_term
from mucalc.typecheck import MuTypeError, infer
from mucalc.verdict import DISTINCT, EQUAL, UNKNOWN, Verdict

RULES = ("context", "not-of-F", "focus-image", "composition", "functor-action", "normal-form")


@dataclass(frozen=True)
class FocalCertificate:
    """Derivation of focality; ``data`` holds rule-specific parameters."""
    rule: str
    term: Term
    children: tuple["FocalCertificate", ...] = ()
    data: tuple = ()

    def rules(self) -> list[str]:
        out = [self.rule]
        for c in self.children:
            out += c.rules()
        return out

    def to_dict(self) -> dict:
        from mucalc.syntax.printer import pretty
        return {"rule": self.rule, "term": pretty(self.term),
                "children": [c.to_dict() for c in self.children]}


# ---------------------------------------------------------------- grammar


def is_focal_context(e: Term) -> bool:
    """``E ::= - | E M | \\x.E | pi_j E | mu a.E | [a] E | mu(a1,a2).E | [a1,a2] E``."""
    if hole_count(e) != 1:
        return False
    return _ctx(e, lambda t: isinstance(t, Hole), frozenset())


def _ctx(e: Term, is_hole, bound: frozenset) -> bool:
    if is_hole(e):
        return True
    match e:
        case App(f, m):
            return _ctx(f, is_hole, bound) and not _mentions(m, is_hole)
        case Lam(x, _, b):
            return _ctx(b, is_hole, bound | {x})
        case Proj(_, b) | Mu(_, _, b) | Named(_, b) | MuPair(_, _, _, _, b) | NamedPair(_, _, b):
            return _ctx(b, is_hole, bound)
    return False


def _mentions(m: Term, is_hole) -> bool:
    from mucalc.syntax.names import subterms
    return any(is_hole(s) for s in subterms(m))


def _var_context(body: Term, x: str) -> bool:
    """``body`` is ``E[x]`` for a focal context ``E`` whose only ``x`` is the hole."""
    match body:
        case Var(y):
            return y == x
        case App(f, m):
            return x not in m.fv and _var_context(f, x)
        case Lam(y, _, b):
            return y != x and _var_context(b, x)
        case Proj(_, b) | Mu(_, _, b) | Named(_, b) | MuPair(_, _, _, _, b) | NamedPair(_, _, b):
            return _var_context(b, x)
    return False


# ---------------------------------------------------------------- certificates


def _match_not(f: Term) -> Optional[Term]:
    """``\\k.\\x. k (G x)`` -> ``G``."""
    match f:
        case Lam(k, _, Lam(x, _, App(Var(k2), App(g, Var(x2))))) if (
                k2 == k and x2 == x and k != x and not ({k, x} & g.fv)):
            return g
    return None


def _match_focus(f: Term) -> Optional[Term]:
    """``\\x. mu a. x (\\y. [a] G y)`` -> ``G``."""
    match f:
        case Lam(x, _, Mu(a, _, App(Var(x2), Lam(y, _, Named(a2, App(g, Var(y2))))))) if (
                x2 == x and a2 == a and y2 == y and not ({x, y} & g.fv) and a not in g.fcv):
            return g
    return None


def _match_compose(f: Term) -> Optional[tuple[Term, Term]]:
    match f:
        case Lam(x, _, App(f1, App(f2, Var(x2)))) if x2 == x and x not in (f1.fv | f2.fv):
            return f1, f2
    return None


def certify_focal(f: Term, sig: Optional[Signature] = None,
                  depth: int = 8) -> Optional[FocalCertificate]:
    """A certificate that ``f`` is focal, or ``None`` (which is not a claim of non-focality)."""
    if depth <= 0:
        return None
    if _match_not(f) is not None:
        return FocalCertificate("not-of-F", f)
    if _match_focus(f) is not None:
        return FocalCertificate("focus-image", f)
    if isinstance(f, Lam) and _var_context(f.body, f.var):
        return FocalCertificate("context", f)
    parts = _match_compose(f)
    if parts is not None:
        c1 = certify_focal(parts[0], sig, depth - 1)
        c2 = certify_focal(parts[1], sig, depth - 1) if c1 else None
        if c1 and c2:
            return FocalCertificate("composition", f, (c1, c2))
    try:
        nf, _ = normalize(f, sig=sig, fuel=2000)
    except FuelExhausted:
        return None
    if not alpha_eq(nf, f):
        c = certify_focal(nf, sig, depth - 1)
        if c is not None:
            return FocalCertificate("normal-form", f, (c,))
    return None


def certify_action(body: Type, var: str, h: Term, a: Type, b: Type,
                   h_cert: FocalCertificate, avoid=()) -> tuple[Term, FocalCertificate]:
    """The functorial action of ``body`` on a certified ``h`` with its certificate."""
    term = fmap(body, var, h, a, b, avoid)
    return term, FocalCertificate("functor-action", term, (h_cert,), (body, var, a, b))


def replay(cert: FocalCertificate, sig: Optional[Signature] = None) -> bool:
    """Re-check a certificate rule by rule."""
    f = cert.term
    match cert.rule:
        case "not-of-F":
            return _match_not(f) is not None
        case "focus-image":
            return _match_focus(f) is not None
        case "context":
            return isinstance(f, Lam) and _var_context(f.body, f.var)
        case "composition":
            parts = _match_compose(f)
            return (parts is not None and len(cert.children) == 2
                    and alpha_eq(parts[0], cert.children[0].term)
                    and alpha_eq(parts[1], cert.children[1].term)
                    and all(replay(c, sig) for c in cert.children))
        case "functor-action":
            body, var, a, b = cert.data
            (hc,) = cert.children
            return alpha_eq(f, fmap(body, var, hc.term, a, b, all_names(f))) and replay(hc, sig)
        case "normal-form":
            (c,) = cert.children
            try:
                nf, _ = normalize(f, sig=sig, fuel=2000)
            except FuelExhausted:
                return False
            return alpha_eq(nf, c.term) and replay(c, sig)
    return False


# ---------------------------------------------------------------- semantic tests


def _sample_sig(sig: Optional[Signature]) -> Signature:
    out = (sig or Signature()).copy()
    for c, t in default_signature().consts.items():
        out.consts.setdefault(c, t)
    return out


def _fn_type(f: Term, gamma, delta, sig) -> Arrow:
    t = infer(dict(gamma or {}), f, dict(delta or {}), sig)
    if not isinstance(t, Arrow):
        raise MuTypeError("not-a-function", "focality is a property of functions", f,
                          actual=t)
    return t


def focal_sides(f: Term, m: Term, a: str, b_ty: Type, a_ty: Type) -> tuple[Term, Term]:
    """``F (mu a. M)`` and ``mu b. M[a* := [b] F -]``."""
    b = fresh("b", all_names(f, m))
    lhs = App(f, Mu(a, b_ty, m))
    rhs = Mu(b, a_ty, struct_subst(m, a, Named(b, App(f, HOLE)), b_ty))
    return lhs, rhs


def _samples(t: Type, gamma, delta, sig, count: int, seed: int, max_size: int = 7):
    """Small terms by enumeration first, random terms for the rest."""
    seen: list[Term] = list(islice(enumerate_terms(t, gamma, delta, sig, max_size), count))
    rng = random.Random(seed)
    gen = TermGen(rng, sig)
    attempts = 0
    while len(seen) < count and attempts < 4 * count:
        attempts += 1
        try:
            seen.append(gen.term(t, gamma, delta, size=rng.randint(3, 9)))
        except ValueError:
            break
    return seen


def _summarise(results: list[tuple[Term, Verdict]], what: str) -> Verdict:
    from mucalc.syntax.printer import pretty
    for m, v in results:
        if v.outcome == DISTINCT:
            return Verdict(DISTINCT, f"{what} fails: {v.reason}", v.left_trace, v.right_trace,
                           witness=pretty(m))
    for m, v in results:
        if v.outcome != EQUAL:
            return Verdict(UNKNOWN, f"{what} undecided on a sample: {v.reason}",
                           witness=pretty(m))
    if not results:
        return Verdict(UNKNOWN, "no samples could be generated")
    return Verdict(EQUAL, f"{what} holds on {len(results)} samples")


def test_focal(f: Term, samples: int = 30, sig: Optional[Signature] = None,
               gamma: Optional[Mapping[str, Type]] = None, seed: int = 0,
               fuel: Optional[int] = None) -> Verdict:
    """Check the defining equation of focality on generated ``M : Bot``.

    Samples live under ``a : B`` and one extra control variable of the sample
    type ``P``, so that ``M`` may escape without touching ``a``.
    """
    ssig = _sample_sig(sig)
    gamma = dict(gamma or {})
    ft = _fn_type(f, gamma, {}, ssig)
    names = all_names(f) | set(gamma)
    a = fresh("a", names)
    esc = fresh("e", names | {a})
    delta = {a: ft.dom, esc: default_signature().consts["p"]}
    results = []
    for m in _samples(BOT, gamma, delta, ssig, samples, seed):
        lhs, rhs = focal_sides(f, m, a, ft.dom, ft.cod)
        results.append((m, equiv(lhs, rhs, ssig, gamma, {esc: delta[esc]}, fuel)))
        if results[-1][1].outcome == DISTINCT:
            break
    return _summarise(results, "focality equation")


test_focal.__test__ = False  # not a pytest test


def central_sides(f: Term, g: Term, x: Term, ft: Arrow, gt: Arrow,
                  a: str, a2: str) -> tuple[Term, Term]:
    """``a(F(mu b.a'(G(mu b'.[b,b']x))))`` and ``a'(G(mu b'.a(F(mu b.[b,b']x))))``."""
    avoid = all_names(f, g, x) | {a, a2}
    b = fresh("b", avoid)
    b2 = fresh("b", avoid | {b})
    pair = NamedPair(b, b2, x)
    lhs = Named(a, App(f, Mu(b, ft.dom, Named(a2, App(g, Mu(b2, gt.dom, pair))))))
    rhs = Named(a2, App(g, Mu(b2, gt.dom, Named(a, App(f, Mu(b, ft.dom, pair))))))
    return lhs, rhs


def check_central(f: Term, g: Term, samples: int = 20, sig: Optional[Signature] = None,
                  seed: int = 0, fuel: Optional[int] = None) -> Verdict:
    """Compare both orders of running ``F`` and ``G`` on a disjunction ``x``."""
    ssig = _sample_sig(sig)
    ft, gt = _fn_type(f, {}, {}, ssig), _fn_type(g, {}, {}, ssig)
    names = all_names(f, g)
    a, a2 = fresh("a", names), fresh("a", names | {fresh("a", names)})
    x = fresh("x", names)
    delta = {a: ft.cod, a2: gt.cod}
    xt = Disj(ft.dom, gt.dom)
    results = []
    lhs, rhs = central_sides(f, g, Var(x), ft, gt, a, a2)
    results.append((Var(x), equiv(lhs, rhs, ssig, {x: xt}, delta, fuel)))
    for n in _samples(xt, {}, delta, ssig, samples - 1, seed, max_size=5):
        if results[-1][1].outcome == DISTINCT:
            break
        l2, r2 = subst_term(lhs, x, n), subst_term(rhs, x, n)
        results.append((n, equiv(l2, r2, ssig, {}, delta, fuel)))
    return _summarise(results, "centrality equation")


# ---------------------------------------------------------------- focus / unfocus, case


def focus(f: Term, sig: Optional[Signature] = None) -> Term:
    t = _fn_type(f, {}, {}, sig or Signature())
    return focus_term(f, t.dom, t.cod)


def unfocus(f: Term, sig: Optional[Signature] = None) -> Term:
    t = _fn_type(f, {}, {}, sig or Signature())
    dom = t.dom
    if not (isinstance(dom, Arrow) and isinstance(dom.dom, Arrow)):
        raise MuTypeError("mismatch", "unfocus expects a function from ~~B", f, actual=dom)
    b = dom.dom.dom
    x = fresh("x", all_names(f))
    k = fresh("k", all_names(f) | {x})
    return Lam(x, b, App(f, Lam(k, neg(b), App(Var(k), Var(x)))))


def case_eta_sides(f: Term, sig: Optional[Signature] = None) -> tuple[Term, Term]:
    """``case[\\x1. F(inj1 x1), \\x2. F(inj2 x2)]`` and ``F`` for ``F : B1 (+) B2 -> A``."""
    from mucalc.syntax.ast import split_oplus
    from mucalc.syntax.elaborate import elaborate
    from mucalc.syntax.ast import Inj
    t = _fn_type(f, {}, {}, sig or Signature())
    parts = split_oplus(t.dom)
    if parts is None:
        raise MuTypeError("not-a-disjunction", "case-eta needs a function from B1 (+) B2",
                          f, actual=t.dom)
    b1, b2 = parts
    x1 = fresh("x", all_names(f))
    x2 = fresh("x", all_names(f) | {x1})
    inj1 = elaborate(Inj(1, t.dom, Var(x1)), sig, {x1: b1})
    inj2 = elaborate(Inj(2, t.dom, Var(x2)), sig, {x2: b2})
    left = case_term(Lam(x1, b1, App(f, inj1)), b1, Lam(x2, b2, App(f, inj2)), b2, t.cod)
    return left, f


def case_beta_sides(f1: Term, f2: Term, j: int, m: Term,
                    sig: Optional[Signature] = None) -> tuple[Term, Term]:
    """``case[F1, F2] (inj_j M)`` and ``F_j M``."""
    from mucalc.syntax.ast import Inj
    from mucalc.syntax.elaborate import elaborate
    s = sig or Signature()
    t1, t2 = _fn_type(f1, {}, {}, s), _fn_type(f2, {}, {}, s)
    inj = elaborate(Inj(j, oplus(t1.dom, t2.dom), m), s)
    case = case_term(f1, t1.dom, f2, t2.dom, t1.cod)
    return App(case, inj), App(f1 if j == 1 else f2, m)


__all__ = [
    "FocalCertificate", "RULES", "is_focal_context", "certify_focal", "certify_action",
    "replay", "test_focal", "check_central", "focal_sides", "central_sides", "focus",
    "unfocus", "case_eta_sides", "case_beta_sides", "dneg",
]
