"""Capture-avoiding substitution, structural substitution and alpha-equivalence."""
from __future__ import annotations

from typing import Optional

from mucalc.syntax.ast import (
    App, Case, Compose, Destr, Focus, Hole, Inj, Lam, Mu, MuPair, Named, NamedPair,
    NotF, Pair, Proj, Term, Type, Unfocus, Unfold, Var,
)
from mucalc.syntax.names import all_names, fresh, hole_count


class ContextError(ValueError):
    pass


def _rebuild(m: Term, kids: list[Term]) -> Term:
    """Same node with new children (binders untouched)."""
    match m:
        case Lam(x, t, _):
            return Lam(x, t, kids[0])
        case Proj(j, _):
            return Proj(j, kids[0])
        case Mu(a, t, _):
            return Mu(a, t, kids[0])
        case Named(a, _):
            return Named(a, kids[0])
        case MuPair(a1, t1, a2, t2, _):
            return MuPair(a1, t1, a2, t2, kids[0])
        case NamedPair(a1, a2, _):
            return NamedPair(a1, a2, kids[0])
        case Destr(n, _):
            return Destr(n, kids[0])
        case Inj(j, t, _):
            return Inj(j, t, kids[0])
        case App(_, _):
            return App(kids[0], kids[1])
        case Pair(_, _):
            return Pair(kids[0], kids[1])
        case Case(_, _):
            return Case(kids[0], kids[1])
        case Compose(_, _):
            return Compose(kids[0], kids[1])
        case Unfold(n, c, _):
            return Unfold(n, c, kids[0])
        case Focus(_):
            return Focus(kids[0])
        case Unfocus(_):
            return Unfocus(kids[0])
        case NotF(_):
            return NotF(kids[0])
    return m


def rename_var(m: Term, old: str, new: str) -> Term:
    return subst_term(m, old, Var(new))


def subst_term(m: Term, x: str, n: Term) -> Term:
    """``m[x := n]``, renaming binders of ``m`` that would capture free names of ``n``."""
    if x not in m.fv:
        return m
    match m:
        case Var(y):
            return n if y == x else m
        case Lam(y, t, b):
            if y in n.fv:
                y2 = fresh(y, all_names(b, n) | {x})
                b = rename_var(b, y, y2)
                y = y2
            return Lam(y, t, subst_term(b, x, n))
        case Mu(a, t, b):
            if a in n.fcv:
                a2 = fresh(a, all_names(b, n))
                b = rename_cvar(b, a, a2)
                a = a2
            return Mu(a, t, subst_term(b, x, n))
        case MuPair(a1, t1, a2, t2, b):
            avoid = all_names(b, n)
            if a1 in n.fcv:
                new = fresh(a1, avoid | {a2})
                b, a1 = rename_cvar(b, a1, new), new
            if a2 in n.fcv:
                new = fresh(a2, avoid | {a1})
                b, a2 = rename_cvar(b, a2, new), new
            return MuPair(a1, t1, a2, t2, subst_term(b, x, n))
    from mucalc.syntax.names import children
    return _rebuild(m, [subst_term(c, x, n) for c in children(m)])


def rename_cvar(m: Term, a: str, b: str) -> Term:
    """``m[a := b]`` on control variables, capture-avoiding."""
    if a not in m.fcv or a == b:
        return m
    match m:
        case Named(c, body):
            return Named(b if c == a else c, rename_cvar(body, a, b))
        case NamedPair(c1, c2, body):
            return NamedPair(b if c1 == a else c1, b if c2 == a else c2,
                             rename_cvar(body, a, b))
        case Mu(c, t, body):
            if c == b:
                c2 = fresh(c, all_names(body) | {a, b})
                body, c = rename_cvar(body, b, c2), c2
            return Mu(c, t, rename_cvar(body, a, b))
        case MuPair(c1, t1, c2, t2, body):
            if c1 == b:
                n1 = fresh(c1, all_names(body) | {a, b, c2})
                body, c1 = rename_cvar(body, b, n1), n1
            if c2 == b:
                n2 = fresh(c2, all_names(body) | {a, b, c1})
                body, c2 = rename_cvar(body, b, n2), n2
            return MuPair(c1, t1, c2, t2, rename_cvar(body, a, b))
    from mucalc.syntax.names import children
    return _rebuild(m, [rename_cvar(c, a, b) for c in children(m)])


def fill(ctx: Term, m: Term) -> Term:
    """Plug ``m`` into the hole of ``ctx``; binders on the hole path are renamed
    so they do not capture free names of ``m``."""
    match ctx:
        case Hole():
            return m
        case Lam(y, t, b) if y in m.fv:
            y2 = fresh(y, all_names(b, m))
            return Lam(y2, t, fill(rename_var(b, y, y2), m))
        case Mu(a, t, b) if a in m.fcv:
            a2 = fresh(a, all_names(b, m))
            return Mu(a2, t, fill(rename_cvar(b, a, a2), m))
        case MuPair(a1, t1, a2, t2, b) if a1 in m.fcv or a2 in m.fcv:
            avoid = all_names(b, m)
            if a1 in m.fcv:
                n1 = fresh(a1, avoid | {a2})
                b, a1 = rename_cvar(b, a1, n1), n1
            if a2 in m.fcv:
                n2 = fresh(a2, avoid | {a1})
                b, a2 = rename_cvar(b, a2, n2), n2
            return MuPair(a1, t1, a2, t2, fill(b, m))
    from mucalc.syntax.names import children
    kids = children(ctx)
    return _rebuild(ctx, [fill(c, m) if hole_count(c) else c for c in kids])


def _is_renaming(ctx: Term) -> Optional[str]:
    if isinstance(ctx, Named) and isinstance(ctx.body, Hole):
        return ctx.cvar
    return None


def struct_subst(m: Term, a: str, ctx: Term, a_type: Optional[Type] = None) -> Term:
    """``m[a* := ctx]``: every ``[a] N`` becomes ``ctx[N[a* := ctx]]``.

    A ``[a1, a2] N`` with ``a`` among ``a1, a2`` becomes
    ``ctx[mu a. [a1, a2] N[a* := ctx]]``, which needs ``a_type``.
    The context ``[b] -`` is treated as plain renaming.
    """
    if hole_count(ctx) != 1:
        raise ContextError("control context must contain exactly one hole")
    b = _is_renaming(ctx)
    if b is not None:
        return rename_cvar(m, a, b)
    return _ss(m, a, ctx, a_type)


def _ss(m: Term, a: str, ctx: Term, a_type: Optional[Type]) -> Term:
    if a not in m.fcv:
        return m
    match m:
        case Named(c, body):
            inner = _ss(body, a, ctx, a_type)
            return fill(ctx, inner) if c == a else Named(c, inner)
        case NamedPair(c1, c2, body):
            inner = _ss(body, a, ctx, a_type)
            if a in (c1, c2):
                if a_type is None:
                    raise ContextError(f"type of control variable {a} needed for [{c1},{c2}]")
                return fill(ctx, Mu(a, a_type, NamedPair(c1, c2, inner)))
            return NamedPair(c1, c2, inner)
        case Mu(c, t, body):
            if c in ctx.fcv:
                c2 = fresh(c, all_names(body, ctx) | {a})
                body, c = rename_cvar(body, c, c2), c2
            return Mu(c, t, _ss(body, a, ctx, a_type))
        case MuPair(c1, t1, c2, t2, body):
            avoid = all_names(body, ctx) | {a}
            if c1 in ctx.fcv:
                n1 = fresh(c1, avoid | {c2})
                body, c1 = rename_cvar(body, c1, n1), n1
            if c2 in ctx.fcv:
                n2 = fresh(c2, avoid | {c1})
                body, c2 = rename_cvar(body, c2, n2), n2
            return MuPair(c1, t1, c2, t2, _ss(body, a, ctx, a_type))
        case Lam(y, t, body):
            if y in ctx.fv:
                y2 = fresh(y, all_names(body, ctx))
                body, y = rename_var(body, y, y2), y2
            return Lam(y, t, _ss(body, a, ctx, a_type))
    from mucalc.syntax.names import children
    return _rebuild(m, [_ss(c, a, ctx, a_type) for c in children(m)])


def alpha_eq(m: Term, n: Term) -> bool:
    """True iff ``m`` and ``n`` differ only in bound term/control variable names."""
    return _aeq(m, n, {}, {}, {}, {}, 0)


def _aeq(m, n, vl, vr, cl, cr, depth) -> bool:
    if type(m) is not type(n):
        return False
    match m:
        case Var(x):
            y = n.name
            lx, ly = vl.get(x), vr.get(y)
            return lx == ly if (lx is not None or ly is not None) else x == y
        case Lam(x, t, b):
            if t != n.ty:
                return False
            return _aeq(b, n.body, {**vl, x: depth}, {**vr, n.var: depth}, cl, cr, depth + 1)
        case Mu(a, t, b):
            if t != n.ty:
                return False
            return _aeq(b, n.body, vl, vr, {**cl, a: depth}, {**cr, n.cvar: depth}, depth + 1)
        case MuPair(a1, t1, a2, t2, b):
            if t1 != n.ty1 or t2 != n.ty2:
                return False
            return _aeq(b, n.body, vl, vr,
                        {**cl, a1: (depth, 1), a2: (depth, 2)},
                        {**cr, n.cvar1: (depth, 1), n.cvar2: (depth, 2)}, depth + 1)
        case Named(a, b):
            return _ceq(a, n.cvar, cl, cr) and _aeq(b, n.body, vl, vr, cl, cr, depth)
        case NamedPair(a1, a2, b):
            return (_ceq(a1, n.cvar1, cl, cr) and _ceq(a2, n.cvar2, cl, cr)
                    and _aeq(b, n.body, vl, vr, cl, cr, depth))
        case Proj(j, b):
            return j == n.index and _aeq(b, n.body, vl, vr, cl, cr, depth)
        case Destr(nu, b):
            return nu == n.nu and _aeq(b, n.body, vl, vr, cl, cr, depth)
        case Unfold(nu, car, c):
            return nu == n.nu and car == n.carrier and _aeq(c, n.coalg, vl, vr, cl, cr, depth)
        case Inj(j, t, b):
            return j == n.index and t == n.ty and _aeq(b, n.body, vl, vr, cl, cr, depth)
        case App() | Pair() | Case() | Compose() | Focus() | Unfocus() | NotF():
            from mucalc.syntax.names import children
            return all(_aeq(x, y, vl, vr, cl, cr, depth)
                       for x, y in zip(children(m), children(n)))
        case _:
            return m == n


def _ceq(a, b, cl, cr) -> bool:
    la, lb = cl.get(a), cr.get(b)
    if la is None and lb is None:
        return a == b
    return la == lb
