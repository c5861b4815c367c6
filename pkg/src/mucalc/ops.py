"""Operations behind the command line and the HTTP service; each returns a RunReport."""
from __future__ import annotations

import time
from typing import Mapping, Optional, Sequence

from mucalc import cps
from mucalc.demo import demo_list
from mucalc.focality import certify_focal, test_focal
from mucalc.report import RunReport
from mucalc.rewrite import FuelExhausted, equiv, normalize
from mucalc.script import Session
from mucalc.syntax.ast import TConst, Term, Type
from mucalc.syntax.names import free_cvars, free_vars
from mucalc.syntax.parser import Assertion, parse_script, parse_term, parse_type
from mucalc.syntax.printer import pretty, pretty_type
from mucalc.typecheck import MuTypeError, infer
from mucalc.verdict import DISTINCT, EQUAL


class UsageError(Exception):
    """Malformed request; front ends map it to exit code 2."""


def _elapsed(t0: float) -> float:
    return round(time.perf_counter() - t0, 6)


class TermContext:
    """Declarations and typing environments for terms given as text.

    Free names with no declared type get a base type of their own (``T_x``),
    which is enough for terms like ``pi1 <x, y>``.
    """

    def __init__(self, decls: Optional[str] = None, variables: Mapping[str, str] = {},
                 cvariables: Mapping[str, str] = {}):
        self.session = Session()
        if decls:
            for d in parse_script(decls).decls:
                if not isinstance(d, Assertion):
                    self.session.declare(d)
        self.gamma = {x: self.type(t) for x, t in variables.items()}
        self.delta = {a: self.type(t) for a, t in cvariables.items()}

    @property
    def sig(self):
        return self.session.sig

    def type(self, text: str) -> Type:
        return parse_type(text, self.session.aliases, self.sig.nus)

    def parse(self, text: str) -> Term:
        return parse_term(text, self.sig.consts, self.session.aliases, self.sig.nus)

    def term(self, text: str) -> Term:
        m = self.parse(text)
        for x in sorted(free_vars(m) - set(self.gamma) - set(self.session.defs)):
            self.gamma[x] = TConst(f"T_{x}")
        for a in sorted(free_cvars(m) - set(self.delta)):
            self.delta[a] = TConst(f"T_{a}")
        return self.session.elab(m, self.gamma, self.delta, None)

    def infer(self, m: Term) -> Type:
        return infer(self.gamma, m, self.delta, self.sig)


def parse_bindings(items: Sequence[str]) -> dict[str, str]:
    """``["x:P", "f:P -> Q"]`` to ``{"x": "P", "f": "P -> Q"}``."""
    out = {}
    for text in items:
        name, sep, ty = text.partition(":")
        if not sep or not name.strip():
            raise UsageError(f"expected NAME:TYPE, got {text!r}")
        out[name.strip()] = ty
    return out


def normalize_terms(ctx: TermContext, exprs: Sequence[str], fuel: Optional[int] = None,
                    eta: bool = False) -> tuple[RunReport, list[list]]:
    """Normal forms; also returns each trace for display."""
    report, traces = RunReport(command="normalize"), []
    for text in exprs:
        m = ctx.term(text)
        ty = ctx.infer(m)
        t0 = time.perf_counter()
        try:
            nf, trace = normalize(m, fuel, ctx.sig, ctx.delta, eta=eta)
            verdict, output = "normal", pretty(nf)
        except FuelExhausted as exc:
            trace, verdict, output = getattr(exc, "trace", []), "unknown", None
        traces.append(trace)
        report.add("normalize", verdict, verdict == "normal", inputs=[text], output=output,
                   reason=f"type {pretty_type(ty)}", trace_length=len(trace),
                   wall_time=_elapsed(t0))
    return report, traces


def equiv_terms(ctx: TermContext, left: str, right: str,
                fuel: Optional[int] = None) -> RunReport:
    m, n = ctx.term(left), ctx.term(right)
    tm, tn = ctx.infer(m), ctx.infer(n)
    if tm != tn:
        raise MuTypeError("mismatch", f"sides have types {pretty_type(tm)} and {pretty_type(tn)}",
                          expected=tm, actual=tn)
    t0 = time.perf_counter()
    v = equiv(m, n, ctx.sig, ctx.gamma, ctx.delta, fuel)
    report = RunReport(command="equiv")
    report.add("equal", v.outcome, v.outcome == EQUAL, expected=EQUAL, inputs=[left, right],
               reason=v.reason, witness=v.witness,
               trace_length=len(v.left_trace) + len(v.right_trace), wall_time=_elapsed(t0))
    return report


def focal_terms(ctx: TermContext, exprs: Sequence[str], samples: int = 20, seed: int = 0,
                fuel: Optional[int] = None) -> RunReport:
    """Certify each function, falling back to the sampled focality test."""
    report = RunReport(command="focal")
    for text in exprs:
        f = ctx.term(text)
        t0 = time.perf_counter()
        cert = certify_focal(f, ctx.sig)
        if cert is not None:
            verdict, reason, witness = "focal", "certified by " + ", ".join(cert.rules()), None
        else:
            v = test_focal(f, samples, ctx.sig, ctx.gamma, seed, fuel)
            verdict = {EQUAL: "focal", DISTINCT: "nonfocal"}.get(v.outcome, "unknown")
            reason, witness = v.reason, v.witness
        report.add("focal", verdict, verdict == "focal", expected="focal", inputs=[text],
                   reason=reason, witness=witness, wall_time=_elapsed(t0))
    return report


def cps_report(ctx: TermContext, types: Sequence[str] = (), exprs: Sequence[str] = (),
               symbols: bool = False) -> RunReport:
    report = RunReport(command="cps")
    for text in types:
        out = cps.show_ttype(cps.cps_type(ctx.type(text), ctx.sig), symbols=symbols)
        report.add("cps-type", "ok", True, inputs=[text], output=out)
    for text in exprs:
        m = ctx.term(text)
        ctx.infer(m)
        try:
            _, translated, nf = cps.describe(m, ctx.sig, ctx.gamma, ctx.delta)
        except (cps.FragmentError, cps.TargetTypeError) as exc:
            report.add("cps-term", "unsupported", False, inputs=[text], reason=str(exc))
            continue
        report.add("cps-term", "ok", True, inputs=[text], output=nf,
                   reason=f"translation: {translated}")
    if not report.records:
        raise UsageError("cps needs a type or a term")
    return report


def list_demo(length: int, elem: Optional[str], ctx: Optional[TermContext] = None,
              fuel: Optional[int] = None) -> RunReport:
    """List fold equations; free names in ``elem`` become constants of type B."""
    if elem is None:
        return demo_list(length, fuel=fuel)
    ctx = ctx or TermContext()
    for x in free_vars(ctx.parse(elem)):
        ctx.sig.consts.setdefault(x, TConst("B"))
    m = ctx.session.elab(ctx.parse(elem), {}, {}, None)
    ty = infer({}, m, {}, ctx.sig)
    return demo_list(length, m, ty, fuel, extra_consts=dict(ctx.sig.consts))


__all__ = ["TermContext", "UsageError", "cps_report", "equiv_terms", "focal_terms",
           "list_demo", "normalize_terms", "parse_bindings"]
