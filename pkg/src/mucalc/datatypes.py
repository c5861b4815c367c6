"""Inductive types derived from coinductive ones.

Pairs of functors ``(F, G)`` come with witnesses of ``~G X ~= F(~X)``.  Given a
coinductive type ``nu X. G X`` whose structure map is focal, the carrier
``~(nu X. G X)`` with algebra ``~out . to`` is a focally initial F-algebra; the
fold of a focal ``F : F A -> A`` is ``M_A . ~(unfold (D . ~F))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator, Optional, Sequence, Union

from mucalc.focality import FocalCertificate, certify_focal, test_focal
from mucalc.functor import fmap
from mucalc.gen import TermGen, default_signature
from mucalc.rewrite import equiv, normalize
from mucalc.syntax.ast import (
    BOT, TOP, App, Arrow, Bot, Const, Destr, Disj, Inj, Lam, Mu, MuPair, Named,
    NamedPair, NuDecl, NuRef, Pair, Prod, Proj, Signature, TConst, Term, Top, TVar,
    Type, Unfold, Unit, Var, UNIT, dneg, neg, oplus, type_subst,
)
from mucalc.syntax.elaborate import case_term, elaborate
from mucalc.syntax.names import all_names, children, fresh
from mucalc.syntax.printer import pretty, pretty_type
from mucalc.syntax.subst import _rebuild
from mucalc.typecheck import check, infer
from mucalc.verdict import DISTINCT, EQUAL, UNKNOWN, Verdict

X = "X"          # parameter of witnesses and declarations
_FV = "%F"       # variable used internally for functorial actions
B = TConst("B")  # default element type


class FocalityRequired(ValueError):
    """A functorial action through a disjunction was requested for an uncertified map."""


class DuplicateDeclaration(ValueError):
    pass


# ---------------------------------------------------------------- helpers


def term_type_subst(m: Term, var: str, t: Type) -> Term:
    """Substitute ``t`` for the type variable ``var`` in every annotation of ``m``."""
    ts = lambda a: type_subst(a, var, t)  # noqa: E731
    kids = [term_type_subst(c, var, t) for c in children(m)]
    match m:
        case Lam(x, a, _):
            return Lam(x, ts(a), kids[0])
        case Mu(a, ty, _):
            return Mu(a, ts(ty), kids[0])
        case MuPair(a1, t1, a2, t2, _):
            return MuPair(a1, ts(t1), a2, ts(t2), kids[0])
        case Unfold(n, car, _):
            return Unfold(n, None if car is None else ts(car), kids[0])
        case Inj(j, ty, _):
            return Inj(j, ts(ty), kids[0])
    return _rebuild(m, kids) if kids else m


def identity(t: Type, name: str = "x") -> Term:
    return Lam(name, t, Var(name))


def compose(f: Term, g: Term, dom: Type) -> Term:
    """``f . g`` for ``g : dom -> _``."""
    x = fresh("x", all_names(f, g))
    return Lam(x, dom, App(f, App(g, Var(x))))


def not_map(f: Term, dom: Type, cod: Type) -> Term:
    """``~F = \\k:~A. \\x:B. k (F x)`` for ``F : B -> A``."""
    k = fresh("k", all_names(f))
    x = fresh("x", all_names(f) | {k})
    return Lam(k, neg(cod), Lam(x, dom, App(Var(k), App(f, Var(x)))))


def m_map(a: Type) -> Term:
    """``M_A = \\x:~~A. mu a:A. x (\\z:A. [a] z)``."""
    return Lam("x", dneg(a), Mu("a", a, App(Var("x"), Lam("z", a, Named("a", Var("z"))))))


def dneg_map(h: Term, dom: Type, cod: Type) -> Term:
    """``~~H = \\y. \\k. y (\\x. k (H x))``."""
    body = App(Var("y"), Lam("x", dom, App(Var("k"), App(h, Var("x")))))
    return Lam("y", dneg(dom), Lam("k", neg(cod), body))


def copair(f1: Term, f2: Term, l: Type, r: Type, a: Type) -> Term:
    """``[F1, F2] : L \\/ R -> A``, a coproduct arrow among focal functions."""
    avoid = all_names(f1, f2)
    x, ca = fresh("x", avoid), fresh("a", avoid)
    b1 = fresh("b", avoid | {ca})
    b2 = fresh("b", avoid | {ca, b1})
    inner = Mu(b2, r, NamedPair(b1, b2, Var(x)))
    body = Named(ca, App(f1, Mu(b1, l, Named(ca, App(f2, inner)))))
    return Lam(x, Disj(l, r), Mu(ca, a, body))


# ---------------------------------------------------------------- functor grammar


class FunctorExpr:
    """Syntactic functor; ``at(T)`` instantiates the hole with ``T``."""

    def at(self, t: Type) -> Type:
        raise NotImplementedError

    def body(self, var: str = X) -> Type:
        return self.at(TVar(var))

    def through_disj(self) -> bool:
        """Does the hole occur under a disjunction (so the action needs focal maps)?"""
        return False

    def action(self, h: Term, a: Type, b: Type, cert: Optional[FocalCertificate] = None,
               unchecked: bool = False) -> Term:
        """The map ``F h : F a -> F b``."""
        if self.through_disj() and cert is None and not unchecked:
            raise FocalityRequired(f"{self.show()} acts only on certified-focal maps")
        return fmap(self.body(_FV), _FV, h, a, b)

    def certified_action(self, h: Term, a: Type, b: Type,
                         cert: FocalCertificate) -> tuple[Term, FocalCertificate]:
        from mucalc.focality import certify_action
        return certify_action(self.body(_FV), _FV, h, a, b, cert)

    def show(self) -> str:
        return pretty_type(self.body())


@dataclass(frozen=True)
class FHole(FunctorExpr):
    def at(self, t):
        return t


@dataclass(frozen=True)
class FConst(FunctorExpr):
    ty: Type

    def at(self, t):
        return self.ty


@dataclass(frozen=True)
class FDNeg(FunctorExpr):
    inner: FunctorExpr

    def at(self, t):
        return dneg(self.inner.at(t))

    def through_disj(self):
        return self.inner.through_disj()


@dataclass(frozen=True)
class FDisjL(FunctorExpr):
    """``~B \\/ F``."""
    b: Type
    inner: FunctorExpr

    def at(self, t):
        return Disj(neg(self.b), self.inner.at(t))

    def through_disj(self):
        return True


@dataclass(frozen=True)
class FDisj(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr

    def at(self, t):
        return Disj(self.left.at(t), self.right.at(t))

    def through_disj(self):
        return True


@dataclass(frozen=True)
class FDNegProd(FunctorExpr):
    """``~~(B * F)``."""
    b: Type
    inner: FunctorExpr

    def at(self, t):
        return dneg(Prod(self.b, self.inner.at(t)))

    def through_disj(self):
        return self.inner.through_disj()


@dataclass(frozen=True)
class FDNegProdSelf(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr

    def at(self, t):
        return dneg(Prod(self.left.at(t), self.right.at(t)))

    def through_disj(self):
        return self.left.through_disj() or self.right.through_disj()


@dataclass(frozen=True)
class FProd(FunctorExpr):
    """``B * F``."""
    b: Type
    inner: FunctorExpr

    def at(self, t):
        return Prod(self.b, self.inner.at(t))

    def through_disj(self):
        return self.inner.through_disj()


@dataclass(frozen=True)
class FProdSelf(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr

    def at(self, t):
        return Prod(self.left.at(t), self.right.at(t))

    def through_disj(self):
        return self.left.through_disj() or self.right.through_disj()


@dataclass(frozen=True)
class FOPlus(FunctorExpr):
    """``F (+) G``; its action is defined on all maps."""
    left: FunctorExpr
    right: FunctorExpr

    def at(self, t):
        return oplus(self.left.at(t), self.right.at(t))

    def through_disj(self):
        return False


@dataclass(frozen=True)
class FCompose(FunctorExpr):
    """``outer (inner X)``."""
    outer: FunctorExpr
    inner: FunctorExpr

    def at(self, t):
        return self.outer.at(self.inner.at(t))

    def through_disj(self):
        return self.outer.through_disj() or self.inner.through_disj()


HOLE_F = FHole()


# ---------------------------------------------------------------- pairs


@dataclass(frozen=True)
class FunctorPair:
    """``(F, G)`` with ``to : F(~X) -> ~G X`` and ``from : ~G X -> F(~X)``."""
    name: str
    left: FunctorExpr
    right: FunctorExpr
    witness_to: Term
    witness_from: Term

    def to_at(self, t: Type) -> Term:
        return term_type_subst(self.witness_to, X, t)

    def from_at(self, t: Type) -> Term:
        return term_type_subst(self.witness_from, X, t)

    def to_type(self, t: Type) -> Type:
        return Arrow(self.left.at(neg(t)), neg(self.right.at(t)))

    def from_type(self, t: Type) -> Type:
        return Arrow(neg(self.right.at(t)), self.left.at(neg(t)))


def _split_to(b: Type, a: Type) -> Term:
    """``~B' \\/ ~A -> ~(B' * A)``: ``\\x. \\p. (mu a2. (mu a1. [a1,a2] x) (pi1 p)) (pi2 p)``."""
    inner = App(Mu("a1", neg(b), NamedPair("a1", "a2", Var("x"))), Proj(1, Var("p")))
    body = App(Mu("a2", neg(a), inner), Proj(2, Var("p")))
    return Lam("x", Disj(neg(b), neg(a)), Lam("p", Prod(b, a), body))


def _split_from(b: Type, a: Type) -> Term:
    """``~(B' * A) -> ~B' \\/ ~A``: ``\\f. mu(a1,a2). [a1] (\\y. [a2] (\\z. f <y, z>))``."""
    body = Named("a1", Lam("y", b, Named("a2", Lam("z", a, App(Var("f"), Pair(Var("y"), Var("z")))))))
    return Lam("f", neg(Prod(b, a)), MuPair("a1", neg(b), "a2", neg(a), body))


def _dsplit_to(b: Type, a: Type) -> Term:
    """``~~(B' * ~A) -> ~(~B' \\/ ~~A)``."""
    inner = App(Mu("a1", neg(b), NamedPair("a1", "a2", Var("d"))), Proj(1, Var("p")))
    body = App(Mu("a2", dneg(a), inner), Proj(2, Var("p")))
    return Lam("x", dneg(Prod(b, neg(a))),
               Lam("d", Disj(neg(b), dneg(a)), App(Var("x"), Lam("p", Prod(b, neg(a)), body))))


def _dsplit_from(b: Type, a: Type) -> Term:
    """``~(~B' \\/ ~~A) -> ~~(B' * ~A)``."""
    named = Named("a1", Lam("y", b, Named("a2", Lam("z", neg(a),
                                                      App(Var("k"), Pair(Var("y"), Var("z")))))))
    body = App(Var("f"), MuPair("a1", neg(b), "a2", dneg(a), named))
    return Lam("f", neg(Disj(neg(b), dneg(a))), Lam("k", neg(Prod(b, neg(a))), body))


def row_dneg() -> FunctorPair:
    """``F X = ~~X``, ``G X = ~~X``; ``~~~X`` on both sides."""
    t = neg(dneg(TVar(X)))
    return FunctorPair("~~X | ~~X", FDNeg(HOLE_F), FDNeg(HOLE_F), identity(t), identity(t))


def row_disj(b: Type = B) -> FunctorPair:
    """``F X = ~B \\/ X``, ``G X = B * X``."""
    x = TVar(X)
    return FunctorPair(f"~{pretty_type(b, 4)} \\/ X | {pretty_type(b, 4)} * X",
                       FDisjL(b, HOLE_F), FProd(b, HOLE_F), _split_to(b, x), _split_from(b, x))


def row_disj_self() -> FunctorPair:
    """``F X = X \\/ X``, ``G X = X * X``."""
    x = TVar(X)
    return FunctorPair("X \\/ X | X * X", FDisj(HOLE_F, HOLE_F), FProdSelf(HOLE_F, HOLE_F),
                       _split_to(x, x), _split_from(x, x))


def row_dneg_prod(b: Type = B) -> FunctorPair:
    """``F X = ~~(B * X)``, ``G X = ~B \\/ ~~X``."""
    x = TVar(X)
    return FunctorPair(f"~~({pretty_type(b, 4)} * X) | ~{pretty_type(b, 4)} \\/ ~~X",
                       FDNegProd(b, HOLE_F), FDisjL(b, FDNeg(HOLE_F)),
                       _dsplit_to(b, x), _dsplit_from(b, x))


def row_dneg_prod_self() -> FunctorPair:
    """``F X = ~~(X * X)``, ``G X = X (+) X``."""
    x = TVar(X)
    return FunctorPair("~~(X * X) | X (+) X", FDNegProdSelf(HOLE_F, HOLE_F),
                       FOPlus(HOLE_F, HOLE_F), _dsplit_to(neg(x), x), _dsplit_from(neg(x), x))


def primitive_pairs(b: Type = B) -> list[FunctorPair]:
    """The five primitive functor pairs."""
    return [row_dneg(), row_disj(b), row_disj_self(), row_dneg_prod(b), row_dneg_prod_self()]


def _cert(f: Term, sig=None) -> FocalCertificate:
    c = certify_focal(f, sig)
    if c is None:
        raise FocalityRequired(f"cannot certify {pretty(f)} as focal")
    return c


def compose_pairs(p2: FunctorPair, p1: FunctorPair, name: Optional[str] = None) -> FunctorPair:
    """``~G2 G1 X ~= F2 F1 (~X)`` from the two component isomorphisms.

    ``to = to2[X := G1 X] . F2(to1)`` and ``from = F2(from1) . from2[X := G1 X]``.
    """
    x = TVar(X)
    g1x = p1.right.at(x)
    to1, from1 = p1.witness_to, p1.witness_from
    f1nx = p1.left.at(neg(x))
    f2_to1 = p2.left.action(to1, f1nx, neg(g1x), _cert(to1))
    f2_from1 = p2.left.action(from1, neg(g1x), f1nx, _cert(from1))
    to2 = p2.to_at(g1x)
    from2 = p2.from_at(g1x)
    to = compose(to2, f2_to1, p2.left.at(f1nx))
    frm = compose(f2_from1, from2, neg(p2.right.at(g1x)))
    return FunctorPair(name or f"({p2.name}) o ({p1.name})", FCompose(p2.left, p1.left),
                       FCompose(p2.right, p1.right), to, frm)


def nat_pair() -> FunctorPair:
    """``F X = ~~Top \\/ X``, ``G X = Bot * X``."""
    x = TVar(X)
    inner = App(Mu("a1", dneg(TOP), NamedPair("a1", "a2", Var("x"))),
                Lam("u", TOP, Proj(1, Var("p"))))
    to = Lam("x", Disj(dneg(TOP), neg(x)),
             Lam("p", Prod(BOT, x), App(Mu("a2", neg(x), inner), Proj(2, Var("p")))))
    named = Named("a1", Lam("k", neg(TOP), Named("a2", Lam(
        "z", x, App(Var("f"), Pair(App(Var("k"), UNIT), Var("z")))))))
    frm = Lam("f", neg(Prod(BOT, x)), MuPair("a1", dneg(TOP), "a2", neg(x), named))
    return FunctorPair("~~Top \\/ X | Bot * X", FDisjL(neg(TOP), HOLE_F), FProd(BOT, HOLE_F),
                       to, frm)


def nat_prime_pair() -> FunctorPair:
    """``Top (+) X`` against ``~Top * ~~X``."""
    return compose_pairs(row_disj(neg(TOP)), row_dneg(), "Top (+) X | ~Top * ~~X")


def list_pair(b: Type = B) -> FunctorPair:
    """``Top (+) (B * X)`` against ``~Top * (~B \\/ ~~X)``."""
    bs = pretty_type(b, 4)
    return compose_pairs(row_disj(neg(TOP)), row_dneg_prod(b),
                         f"Top (+) ({bs} * X) | ~Top * (~{bs} \\/ ~~X)")


def tree_pair(b: Type = B) -> FunctorPair:
    """``B (+) (X * X)`` against ``~B * (X (+) X)``."""
    bs = pretty_type(b, 4)
    return compose_pairs(row_disj(neg(b)), row_dneg_prod_self(),
                         f"{bs} (+) (X * X) | ~{bs} * (X (+) X)")


def corrupt(p: FunctorPair) -> FunctorPair:
    """Swap the two control variables of every ``[a1, a2]`` in ``to`` (a negative control)."""
    def swap(m: Term) -> Term:
        kids = [swap(c) for c in children(m)]
        if isinstance(m, NamedPair):
            return NamedPair(m.cvar2, m.cvar1, kids[0])
        return _rebuild(m, kids) if kids else m
    return FunctorPair(p.name + " (corrupted)", p.left, p.right, swap(p.witness_to),
                       p.witness_from)


# ---------------------------------------------------------------- validation


def _sample_sig(sig: Optional[Signature] = None) -> Signature:
    out = default_signature()
    out.consts.update({"b0": B, "h": Arrow(TConst("Q"), TConst("Q"))})
    if sig is not None:
        out.consts.update(sig.consts)
        out.nus.update(sig.nus)
    return out


def validate_pair(p: FunctorPair, samples: int = 20, alpha: Type = TConst("P"),
                  seed: int = 0, sig: Optional[Signature] = None) -> Verdict:
    """Round trips, naturality on sample focal maps, and focality of both witnesses."""
    import random
    ssig = _sample_sig(sig)
    to, frm = p.to_at(alpha), p.from_at(alpha)
    check({}, to, p.to_type(alpha), {}, ssig)
    check({}, frm, p.from_type(alpha), {}, ssig)
    checks: list[tuple[str, Verdict]] = []
    for name, w in (("to", to), ("from", frm)):
        if certify_focal(w, ssig) is None:
            checks.append((f"{name} focal", test_focal(w, 10, ssig)))
    fx, gx = p.left.at(neg(alpha)), neg(p.right.at(alpha))
    checks.append(("to . from", equiv(compose(to, frm, gx), identity(gx), ssig)))
    checks.append(("from . to", equiv(compose(frm, to, fx), identity(fx), ssig)))
    rng = random.Random(seed)
    gen = TermGen(rng, ssig)
    for i in range(samples):
        s, t = (gx, fx) if i % 2 == 0 else (fx, gx)
        f, g = (frm, to) if i % 2 == 0 else (to, frm)
        try:
            m = gen.term(s, size=rng.randint(3, 7))
        except ValueError:
            continue
        checks.append((f"round trip on {pretty(m)}", equiv(App(g, App(f, m)), m, ssig)))
    checks += [(f"naturality at {pretty(h)}", v) for h, v in _naturality(p, ssig)]
    for label, v in checks:
        if v.outcome == DISTINCT:
            return Verdict(DISTINCT, f"{p.name}: {label} fails ({v.reason})", witness=label)
    for label, v in checks:
        if v.outcome != EQUAL:
            return Verdict(UNKNOWN, f"{p.name}: {label} undecided ({v.reason})", witness=label)
    return Verdict(EQUAL, f"{p.name}: {len(checks)} checks pass")


def _naturality(p: FunctorPair, sig: Signature) -> Iterator[tuple[Term, Verdict]]:
    """``to_A . F(~H) == ~(G H) . to_A'`` for focal ``H : A -> A'``."""
    q = TConst("Q")
    a = neg(q)
    h_not = not_map(Const("h"), q, q)
    pool = [identity(a), h_not, compose(h_not, h_not, a)]
    for h in pool:
        hc = _cert(h, sig)
        nh = not_map(h, a, a)
        f_nh = p.left.action(nh, neg(a), neg(a), _cert(nh, sig))
        g_h = p.right.action(h, a, a, hc)
        lhs = compose(p.to_at(a), f_nh, p.left.at(neg(a)))
        rhs = compose(not_map(g_h, p.right.at(a), p.right.at(a)), p.to_at(a),
                      p.left.at(neg(a)))
        yield h, equiv(lhs, rhs, sig)


# ---------------------------------------------------------------- coinductive declarations


@dataclass(frozen=True)
class CoinductiveSig:
    name: str
    functor: FunctorExpr
    decl: NuDecl

    @property
    def ty(self) -> Type:
        return NuRef(self.name)

    def out(self, m: Term) -> Term:
        return Destr(self.name, m)

    def observe(self, j: int) -> Term:
        """``pi_j . out`` for product-shaped bodies."""
        return Lam("x", self.ty, Proj(j, Destr(self.name, Var("x"))))

    def unfold(self, coalg: Term, carrier: Type) -> Term:
        return Unfold(self.name, carrier, coalg)


def declare_coinductive(name: str, g: FunctorExpr, sig: Signature) -> CoinductiveSig:
    """Register ``nu X. G X`` in ``sig`` (typing of out/unfold and the unfold rule follow)."""
    if name in sig.nus or name in sig.consts:
        raise DuplicateDeclaration(f"{name} is already declared")
    decl = NuDecl(name, X, g.body(X))
    sig.nus[name] = decl
    return CoinductiveSig(name, g, decl)


# ---------------------------------------------------------------- Theorem: derived inductive types


@dataclass(frozen=True)
class DerivedCombinators:
    """``M_A``, ``D : ~F A -> G(~A)`` and the ``~~H`` lifter."""
    m: Callable[[Type], Term] = m_map
    dneg: Callable[[Term, Type, Type], Term] = dneg_map


@dataclass
class InductiveEncoding:
    name: str
    pair: FunctorPair
    nu: CoinductiveSig
    sig: Signature
    algebra: Term
    constructors: dict[str, Term] = field(default_factory=dict)
    combinators: DerivedCombinators = field(default_factory=DerivedCombinators)

    @property
    def carrier(self) -> Type:
        return neg(self.nu.ty)

    def d_map(self, a: Type) -> Term:
        """``D = M_{G(~A)} . ~from_{~A} . ~(F M_A)`` of type ``~F A -> G(~A)``."""
        fa, fnna = self.pair.left.at(a), self.pair.left.at(dneg(a))
        gna = self.pair.right.at(neg(a))
        m_a = m_map(a)
        f_m = self.pair.left.action(m_a, dneg(a), a, _cert(m_a))
        step1 = not_map(f_m, fnna, fa)                          # ~F A -> ~F(~~A)
        step2 = not_map(self.pair.from_at(neg(a)), neg(gna), fnna)  # ~F(~~A) -> ~~G(~A)
        step3 = m_map(gna)                                      # ~~G(~A) -> G(~A)
        k = fresh("k", all_names(step1, step2, step3))
        return Lam(k, neg(fa), App(step3, App(step2, App(step1, Var(k)))))

    def fold(self, f: Term, a: Optional[Type] = None) -> Term:
        """``fold F = M_A . ~(unfold (D . ~F))``, written ``\\y. mu a. y (unfold(..) (\\z. [a] z))``."""
        if a is None:
            ft = infer({}, f, {}, self.sig)
            assert isinstance(ft, Arrow)
            a = ft.cod
        fa = self.pair.left.at(a)
        coalg = compose(self.d_map(a), not_map(f, fa, a), neg(a))
        u = self.nu.unfold(coalg, neg(a))
        y, ca = fresh("y", all_names(coalg)), fresh("a", all_names(coalg))
        return Lam(y, self.carrier, Mu(ca, a, App(Var(y), App(u, Lam("z", a, Named(ca, Var("z")))))))

    def apply_algebra(self, x: Term) -> Term:
        return App(self.algebra, x)

    def elab(self, text: str, gamma=None, delta=None) -> Term:
        """Parse and elaborate ``text`` against this encoding's signature and constructors."""
        from mucalc.syntax.parser import parse_term
        t = parse_term(text, consts=list(self.sig.consts) + list(self.constructors),
                       nus=list(self.sig.nus))
        return elaborate(t, self.sig, gamma, delta, self.constructors, self.numeral_hook())

    def numeral_hook(self):
        return None


def derive_inductive(p: FunctorPair, c: CoinductiveSig, sig: Signature,
                     name: Optional[str] = None) -> InductiveEncoding:
    """Carrier ``~nu``, algebra ``~out . to``; folds via :meth:`InductiveEncoding.fold`."""
    if c.decl.body != p.right.body(c.decl.var):
        raise ValueError(f"{c.name} is not declared with body {p.right.show()}")
    nu = c.ty
    fnx = p.left.at(neg(nu))
    body = App(App(p.to_at(nu), Var("x")), Destr(c.name, Var("s")))
    algebra = Lam("x", fnx, Lam("s", nu, body))
    return InductiveEncoding(name or c.name, p, c, sig, algebra)


def _nf(m: Term, sig: Signature) -> Term:
    return normalize(m, sig=sig)[0]


# ---------------------------------------------------------------- concrete encodings


class NatEncoding(InductiveEncoding):
    """Naturals as ``~Streams`` with ``zero = \\u. head`` and ``suc = \\y. \\x. y (tail x)``."""

    def numeral(self, n: int) -> Term:
        t = App(self.constructors["zero"], UNIT)
        for _ in range(n):
            t = App(self.constructors["suc"], t)
        return t

    def numeral_hook(self):
        return self.numeral

    def head_tail(self, n: int) -> Term:
        """``\\x. head (tail^n x)``."""
        t: Term = Var("x")
        for _ in range(n):
            t = App(self.constructors["tail"], t)
        return Lam("x", self.nu.ty, App(self.constructors["head"], t))

    def algebra_gf(self, g: Term, f: Term, a: Type) -> Term:
        """``[focus g, f] : ~~Top \\/ A -> A``; focal whenever ``f`` is."""
        from mucalc.syntax.elaborate import focus_term
        return copair(focus_term(g, TOP, a), f, dneg(TOP), a, a)

    def theorem_fold(self, g: Term, f: Term, a: Type) -> Term:
        """The generic fold of :meth:`algebra_gf`; meaningful for focal ``f``."""
        return self.fold(self.algebra_gf(g, f, a), a)

    def fold_gf(self, g: Term, f: Term, a: Type) -> Term:
        """The stream fold ``H`` built from ``G : Top -> A`` and ``F : A -> A`` (any ``F``)."""
        return self.direct_fold(g, f, a)

    def direct_fold(self, g: Term, f: Term, a: Type) -> Term:
        """``\\y. mu a. y (unfold (\\w. <w (G unit), \\x. w (F x)>) (\\z. [a] z))``."""
        coalg = Lam("w", neg(a), Pair(App(Var("w"), App(g, UNIT)),
                                      Lam("x", a, App(Var("w"), App(f, Var("x"))))))
        u = self.nu.unfold(coalg, neg(a))
        return Lam("y", self.carrier, Mu("a", a, App(Var("y"), App(u, Lam(
            "z", a, Named("a", Var("z")))))))


def streams(sig: Signature, name: str = "Streams") -> CoinductiveSig:
    """``nu X. Bot * X``."""
    return declare_coinductive(name, FProd(BOT, HOLE_F), sig)


def nat_encoding(sig: Optional[Signature] = None) -> NatEncoding:
    sig = sig if sig is not None else Signature()
    c = streams(sig)
    base = derive_inductive(nat_pair(), c, sig, "Nat")
    enc = NatEncoding(**base.__dict__)
    head, tail = c.observe(1), c.observe(2)
    zero = Lam("u", TOP, head)
    suc = Lam("y", enc.carrier, Lam("x", c.ty, App(Var("y"), App(tail, Var("x")))))
    enc.constructors.update(head=head, tail=tail, zero=zero, suc=suc)
    return enc


def nat_prime_encoding(sig: Optional[Signature] = None) -> NatEncoding:
    """Naturals as ``~Streams'`` with ``Streams' = nu X. ~Top * ~~X``."""
    sig = sig if sig is not None else Signature()
    p = nat_prime_pair()
    c = declare_coinductive("Streams'", p.right, sig)
    base = derive_inductive(p, c, sig, "Nat'")
    enc = NatEncoding(**base.__dict__)
    head, tail = c.observe(1), c.observe(2)
    # zero' = \u. head', read at type Top -> ~Streams' by feeding u to head'
    zero = Lam("u", TOP, Lam("x", c.ty, App(App(head, Var("x")), Var("u"))))
    suc = Lam("y", enc.carrier, Lam("x", c.ty, App(App(tail, Var("x")), Var("y"))))
    enc.constructors.update(head=head, tail=tail, zero=zero, suc=suc)
    return enc


def case_fold(enc: InductiveEncoding, g: Term, f: Term, a: Type) -> Term:
    """``fold case[G, F]`` for an encoding whose left functor is ``L (+) R``."""
    lt, rt = infer({}, g, {}, enc.sig), infer({}, f, {}, enc.sig)
    assert isinstance(lt, Arrow) and isinstance(rt, Arrow)
    return enc.fold(case_term(g, lt.dom, f, rt.dom, a), a)


class ListEncoding(InductiveEncoding):
    elem: Type = B

    def nil(self) -> Term:
        return App(self.constructors["nil"], UNIT)

    def cons(self, head: Term, tail: Term) -> Term:
        return App(self.constructors["cons"], Pair(head, tail))

    def literal(self, elems: Sequence[Term]) -> Term:
        t = self.nil()
        for e in reversed(elems):
            t = self.cons(e, t)
        return t


def list_encoding(b: Type = B, sig: Optional[Signature] = None,
                  name: str = "ListStreams") -> ListEncoding:
    sig = sig if sig is not None else Signature()
    p = list_pair(b)
    c = declare_coinductive(name, p.right, sig)
    base = derive_inductive(p, c, sig, "List")
    enc = ListEncoding(**base.__dict__)
    enc.elem = b
    fnx = p.left.at(neg(c.ty))
    inj1 = elaborate(Inj(1, fnx, Var("u")), sig, {"u": TOP})
    inj2 = elaborate(Inj(2, fnx, Var("p")), sig, {"p": Prod(b, enc.carrier)})
    enc.constructors.update(
        nil=_nf(Lam("u", TOP, App(enc.algebra, inj1)), sig),
        cons=_nf(Lam("p", Prod(b, enc.carrier), App(enc.algebra, inj2)), sig))
    return enc


TreeShape = Union[Term, tuple]


class TreeEncoding(InductiveEncoding):
    elem: Type = B

    def leaf(self, l: Term) -> Term:
        return App(self.constructors["leaf"], l)

    def fork(self, t1: Term, t2: Term) -> Term:
        return App(self.constructors["fork"], Pair(t1, t2))

    def literal(self, shape: TreeShape) -> Term:
        """A leaf is an element term, a fork is a pair ``(left, right)``."""
        if isinstance(shape, tuple):
            return self.fork(self.literal(shape[0]), self.literal(shape[1]))
        return self.leaf(shape)

    def quoted_fold(self, g: Term, f: Term, a: Type) -> Term:
        """The fold written out directly:
        ``\\y. mu a. y (unfold (\\k. <\\x. k (G x), mu b. [k] F'_b>) (\\z. [a] z))``.
        """
        b = self.elem
        na = neg(a)
        sum_t = oplus(na, na)
        inj = lambda j, c: elaborate(  # noqa: E731
            Inj(j, sum_t, Lam("z", a, Named(c, Var("z")))), self.sig, {}, {c: a})
        fb = App(f, Pair(Mu("b1", a, Named("b", inj(1, "b1"))),
                         Mu("b2", a, Named("b", inj(2, "b2")))))
        # k has type ~A, so "k F'_b" is an application, not a naming
        coalg = Lam("k", na, Pair(Lam("x", b, App(Var("k"), App(g, Var("x")))),
                                  Mu("b", sum_t, App(Var("k"), fb))))
        u = self.nu.unfold(coalg, na)
        return Lam("y", self.carrier, Mu("a", a, App(Var("y"), App(u, Lam(
            "z", a, Named("a", Var("z")))))))


def tree_streams(b: Type, sig: Signature, name: str = "TreeStreams") -> CoinductiveSig:
    """``nu X. ~B * (X (+) X)``."""
    return declare_coinductive(name, FProd(neg(b), FOPlus(HOLE_F, HOLE_F)), sig)


def tree_encoding(b: Type = B, sig: Optional[Signature] = None,
                  name: str = "TreeStreams") -> TreeEncoding:
    sig = sig if sig is not None else Signature()
    p = tree_pair(b)
    c = tree_streams(b, sig, name)
    base = derive_inductive(p, c, sig, "Tree")
    enc = TreeEncoding(**base.__dict__)
    enc.elem = b
    nu = c.ty
    head, tail = c.observe(1), c.observe(2)
    trees = enc.carrier
    leaf = Lam("y", b, Lam("x", nu, App(App(head, Var("x")), Var("y"))))
    sel = App(Mu("a1", neg(trees), NamedPair("a1", "a2", App(tail, Var("x")))), Proj(1, Var("y")))
    fork = Lam("y", Prod(trees, trees),
               Lam("x", nu, App(Mu("a2", neg(trees), sel), Proj(2, Var("y")))))
    enc.constructors.update(head=head, tail=tail, leaf=leaf, fork=fork)
    return enc


def tree_shapes(depth: int, alphabet: Sequence[Term]) -> list[TreeShape]:
    """All shapes of depth at most ``depth``; a single leaf has depth 1."""
    if depth <= 0:
        return []
    smaller = tree_shapes(depth - 1, alphabet)
    return list(alphabet) + [(l, r) for l, r in product(smaller, smaller)]


def shape_depth(s: TreeShape) -> int:
    return 1 + max(shape_depth(s[0]), shape_depth(s[1])) if isinstance(s, tuple) else 1


__all__ = [name for name in dir() if not name.startswith("_")]
