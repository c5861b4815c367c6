"""Checking and running ``.mu`` scripts.

Declarations are registered serially in source order; assertions are then
dispatched to the engine (``==``/``!=``), the focality checker
(``focal``/``nonfocal``) or the CPS oracle (``oracle ... == ...``).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from mucalc import cps
from mucalc.focality import certify_focal, test_focal
from mucalc.report import EXIT_USAGE, RunReport
from mucalc.rewrite import equiv
from mucalc.syntax.ast import Signature, Term, Type, nu_refs, type_vars
from mucalc.syntax.elaborate import ElaborationError, elaborate
from mucalc.syntax.parser import (
    Assertion, ConstDecl, Definition, NuDeclaration, ParseError, Script, TypeAlias,
    parse_script,
)
from mucalc.syntax.printer import pretty_type
from mucalc.typecheck import MuTypeError, check_type_wf, infer
from mucalc.verdict import DISTINCT, EQUAL, UNKNOWN

SCRIPT_DIR = Path(__file__).parent / "scripts"
BUNDLED = ("nat.mu", "nat_prime.mu", "lists.mu", "trees.mu",
           "axioms.mu", "functor_pairs.mu")


@dataclass(frozen=True)
class Options:
    fuel: Optional[int] = None
    samples: int = 20
    seed: int = 0


@dataclass
class Session:
    """Declaration table built up while a script is processed."""
    sig: Signature = field(default_factory=Signature)
    aliases: dict[str, Type] = field(default_factory=dict)
    defs: dict[str, Term] = field(default_factory=dict)
    def_types: dict[str, Type] = field(default_factory=dict)

    def _fresh_name(self, name: str, span) -> None:
        if (name in self.aliases or name in self.sig.nus or name in self.sig.consts
                or name in self.defs):
            raise MuTypeError("duplicate", f"{name} is already declared").with_span(span)

    def declare(self, decl) -> Optional[Type]:
        """Register one non-assertion declaration; return the type it introduces."""
        match decl:
            case TypeAlias(name, ty, span):
                self._fresh_name(name, span)
                self._wf(ty, span)
                self.aliases[name] = ty
                return ty
            case NuDeclaration(nu, span):
                self._fresh_name(nu.name, span)
                undeclared = nu_refs(nu.body) - set(self.sig.nus) - {nu.name}
                if undeclared:
                    raise MuTypeError("bad-nu", f"undeclared coinductive type "
                                      f"{sorted(undeclared)[0]}").with_span(span)
                if type_vars(nu.body) - {nu.var}:
                    raise MuTypeError("bad-nu", "stray type variable in nu body").with_span(span)
                self.sig.nus[nu.name] = nu
                return nu.body
            case ConstDecl(name, ty, span):
                self._fresh_name(name, span)
                self._wf(ty, span)
                self.sig.consts[name] = ty
                return ty
            case Definition(name, ty, term, span):
                self._fresh_name(name, span)
                m = self.elab(term, {}, {}, span)
                t = self._infer({}, m, {}, span)
                if ty is not None:
                    self._wf(ty, span)
                    if t != ty:
                        raise MuTypeError("mismatch", f"{name} has type {pretty_type(t)}, "
                                          f"declared {pretty_type(ty)}", expected=ty,
                                          actual=t).with_span(span)
                self.defs[name] = m
                self.def_types[name] = t
                return t
        raise TypeError(f"not a declaration: {decl!r}")

    def _wf(self, ty: Type, span) -> None:
        try:
            check_type_wf(ty, self.sig)
        except MuTypeError as exc:
            raise exc.with_span(span)

    def _infer(self, g, m, d, span) -> Type:
        try:
            return infer(g, m, d, self.sig)
        except MuTypeError as exc:
            raise exc.with_span(span)

    def elab(self, m: Term, g, d, span) -> Term:
        try:
            return elaborate(m, self.sig, g, d, self.defs)
        except ElaborationError as exc:
            raise MuTypeError("sugar", str(exc)).with_span(span) from exc

    def prepare(self, a: Assertion) -> tuple[list[Term], dict, dict, list[Type]]:
        """Elaborate and type an assertion's terms under its ``forall`` binders."""
        for _, t in a.env + a.cenv:
            self._wf(t, a.span)
        g, d = dict(a.env), dict(a.cenv)
        terms = [self.elab(m, g, d, a.span) for m in a.terms]
        types = [self._infer(g, m, d, a.span) for m in terms]
        if len(types) == 2 and types[0] != types[1]:
            raise MuTypeError("mismatch", f"sides have types {pretty_type(types[0])} and "
                              f"{pretty_type(types[1])}", expected=types[0],
                              actual=types[1]).with_span(a.span)
        return terms, g, d, types


def _load(source: str | Path) -> str:
    p = Path(source)
    if not p.exists() and (SCRIPT_DIR / str(source)).exists():
        p = SCRIPT_DIR / str(source)
    return p.read_text(encoding="utf-8")


def _parse(text: str, report: RunReport) -> Optional[Script]:
    try:
        return parse_script(text)
    except ParseError as exc:
        report.fail(f"parse error: {exc}")
        return None


def _type_error(exc: MuTypeError) -> str:
    return f"{exc.location()}: type error: {exc}"


def check_script(text: str) -> RunReport:
    """Type-check every declaration; assertions are typed but not run."""
    report = RunReport(command="check")
    script = _parse(text, report)
    if script is None:
        return report
    s = Session()
    for decl in script.decls:
        line = decl.span[0]
        kind = type(decl).__name__
        try:
            if isinstance(decl, Assertion):
                _, _, _, types = s.prepare(decl)
                shown = [pretty_type(t) for t in types]
                inputs = [decl.source]
            else:
                t = s.declare(decl)
                shown = [pretty_type(t)] if t is not None else []
                inputs = [getattr(decl, "name", None) or decl.decl.name]
        except MuTypeError as exc:
            report.add(kind, "error", False, line=line, reason=str(exc))
            return report.fail(_type_error(exc))
        report.add(kind, "ok", True, line=line, inputs=inputs, reason="; ".join(shown))
    return report


EXPECTED = {"equal": EQUAL, "distinct": DISTINCT, "oracle-equal": EQUAL,
            "oracle-distinct": DISTINCT, "check": "ok", "focal": "focal",
            "nonfocal": "nonfocal"}


def run_assertion(s: Session, a: Assertion, opts: Options) -> dict:
    """Evaluate one assertion; returns the fields of an :class:`AssertionRecord`."""
    terms, g, d, types = s.prepare(a)
    reason, witness, trace = "", None, 0
    match a.kind:
        case "equal" | "distinct":
            v = equiv(terms[0], terms[1], s.sig, g, d, opts.fuel)
            verdict, reason, witness = v.outcome, v.reason, v.witness
            trace = len(v.left_trace) + len(v.right_trace)
        case "oracle-equal" | "oracle-distinct":
            try:
                v = cps.oracle(terms[0], terms[1], s.sig, g, d)
                verdict, reason, witness = v.outcome, v.reason, v.witness
            except (cps.FragmentError, cps.TargetTypeError) as exc:
                verdict, reason = UNKNOWN, f"oracle unavailable: {exc}"
        case "check":
            verdict = "ok" if types[0] == a.ty else "ill-typed"
            reason = f"inferred {pretty_type(types[0])}"
        case "focal" | "nonfocal":
            verdict, reason, witness = _focality(s, terms[0], g, a.kind, opts)
        case _:
            raise ValueError(f"unknown assertion kind {a.kind}")
    return dict(verdict=verdict, reason=reason, witness=witness, trace_length=trace)


def _focality(s: Session, f: Term, g, kind: str, opts: Options):
    if kind == "focal":
        cert = certify_focal(f, s.sig)
        if cert is not None:
            return "focal", "certified by " + ", ".join(cert.rules()), None
    v = test_focal(f, opts.samples, s.sig, g, opts.seed, opts.fuel)
    verdict = {EQUAL: "focal", DISTINCT: "nonfocal"}.get(v.outcome, UNKNOWN)
    return verdict, v.reason, v.witness


def run_text(text: str, opts: Options = Options(), command: str = "run") -> RunReport:
    report = RunReport(command=command)
    script = _parse(text, report)
    if script is None:
        return report
    s = Session()
    for decl in script.decls:
        try:
            if not isinstance(decl, Assertion):
                s.declare(decl)
                continue
            t0 = time.perf_counter()
            fields = run_assertion(s, decl, opts)
            elapsed = time.perf_counter() - t0
        except MuTypeError as exc:
            return report.fail(_type_error(exc))
        expected = EXPECTED[decl.kind]
        report.add(decl.kind, passed=fields["verdict"] == expected, expected=expected,
                   line=decl.span[0], inputs=[decl.source], wall_time=round(elapsed, 6),
                   **fields)
    return report


def run_script(path: str | Path, opts: Options = Options()) -> RunReport:
    """Run a script file; bare names also resolve against the bundled scripts."""
    try:
        text = _load(path)
    except OSError as exc:
        return RunReport(command="run").fail(f"cannot read {path}: {exc.strerror or exc}")
    return run_text(text, opts)


def bundled_script(name: str) -> Path:
    return SCRIPT_DIR / name


__all__ = ["BUNDLED", "EXIT_USAGE", "Options", "Session", "SCRIPT_DIR", "bundled_script",
           "check_script", "run_assertion", "run_script", "run_text"]
