"""Recursive-descent parser for types, terms and ``.mu`` scripts."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from mucalc.syntax.ast import (
    BOT, HOLE, TOP, UNIT, App, Arrow, Case, Compose, Const, Destr, Disj, Focus, Inj,
    Lam, Mu, MuPair, Named, NamedPair, NotF, NuDecl, NuRef, Numeral, Observe, Pair,
    Prod, Proj, TConst, Term, TVar, Type, Unfocus, Unfold, Var, neg, oplus,
)


class ParseError(SyntaxError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg, self.line, self.col = msg, line, col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+|--[^\n]*)
  | (?P<num>\#\d+)
  | (?P<sym>\(\+\)|->|\\/|==|!=|[\\:.()<>,\[\]{}*~;=_])
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
""", re.VERBOSE)

KEYWORDS = {
    "unit", "pi1", "pi2", "mu", "inj1", "inj2", "case", "focus", "unfocus", "not",
    "out", "unfold", "head", "tail", "Top", "Bot", "nu", "compose",
}


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            out.append(Token(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# ---------------------------------------------------------------- script AST


Span = tuple[int, int]


@dataclass(frozen=True)
class TypeAlias:
    name: str
    ty: Type
    span: Span


@dataclass(frozen=True)
class NuDeclaration:
    decl: NuDecl
    span: Span


@dataclass(frozen=True)
class ConstDecl:
    name: str
    ty: Type
    span: Span


@dataclass(frozen=True)
class Definition:
    name: str
    ty: Optional[Type]
    term: Term
    span: Span


@dataclass(frozen=True)
class Assertion:
    """``kind`` is one of equal, distinct, check, focal, nonfocal, oracle-equal,
    oracle-distinct."""
    kind: str
    terms: tuple[Term, ...]
    span: Span
    ty: Optional[Type] = None
    env: tuple[tuple[str, Type], ...] = ()
    cenv: tuple[tuple[str, Type], ...] = ()
    source: str = ""


Declaration = Union[TypeAlias, NuDeclaration, ConstDecl, Definition, Assertion]


@dataclass
class Script:
    decls: list[Declaration] = field(default_factory=list)


# ---------------------------------------------------------------- parser


class Parser:
    def __init__(self, text: str, consts: Iterable[str] = (),
                 aliases: Optional[dict[str, Type]] = None,
                 nus: Iterable[str] = ()):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.consts = set(consts)
        self.aliases = dict(aliases or {})
        self.nus = set(nus)
        self.tvars: set[str] = set()
        self.bound: list[str] = []

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "ident") and t.text in texts

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            shown = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {shown!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.error(f"expected identifier, found {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    def _offset(self, tok: Token) -> int:
        if not hasattr(self, "_line_starts"):
            starts = [0]
            for i, ch in enumerate(self.text):
                if ch == "\n":
                    starts.append(i + 1)
            self._line_starts = starts
        return self._line_starts[tok.line - 1] + tok.col - 1

    def _source(self, start: Token, stop: Token) -> str:
        """Original text between two tokens, whitespace-collapsed."""
        return " ".join(self.text[self._offset(start):self._offset(stop)].split())

    def done(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")

    # -- types
    def type(self) -> Type:
        left = self.disj()
        if self.at("->"):
            self.i += 1
            return Arrow(left, self.type())
        return left

    def disj(self) -> Type:
        left = self.oplus()
        if self.at("\\/"):
            self.i += 1
            return Disj(left, self.disj())
        return left

    def oplus(self) -> Type:
        left = self.prod()
        if self.at("(+)"):
            self.i += 1
            return oplus(left, self.oplus())
        return left

    def prod(self) -> Type:
        left = self.unary()
        if self.at("*"):
            self.i += 1
            return Prod(left, self.prod())
        return left

    def unary(self) -> Type:
        if self.at("~"):
            self.i += 1
            return neg(self.unary())
        return self.type_atom()

    def type_atom(self) -> Type:
        t = self.tok
        if self.at("("):
            self.i += 1
            ty = self.type()
            self.expect(")")
            return ty
        if self.at("Top"):
            self.i += 1
            return TOP
        if self.at("Bot"):
            self.i += 1
            return BOT
        if self.at("nu"):
            self.i += 1
            return NuRef(self.ident())
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.i += 1
            if t.text in self.tvars:
                return TVar(t.text)
            if t.text in self.aliases:
                return self.aliases[t.text]
            if t.text in self.nus:
                return NuRef(t.text)
            return TConst(t.text)
        self.error(f"expected a type, found {t.text or 'end of input'!r}")

    # -- terms
    def term(self) -> Term:
        if self.at("\\"):
            self.i += 1
            x = self.ident()
            self.expect(":")
            ty = self.type()
            self.expect(".")
            self.bound.append(x)
            try:
                body = self.term()
            finally:
                self.bound.pop()
            return Lam(x, ty, body)
        if self.at("mu"):
            self.i += 1
            if self.at("("):
                self.i += 1
                a1 = self.ident()
                self.expect(":")
                t1 = self.type()
                self.expect(",")
                a2 = self.ident()
                self.expect(":")
                t2 = self.type()
                self.expect(")")
                self.expect(".")
                return MuPair(a1, t1, a2, t2, self.term())
            a = self.ident()
            self.expect(":")
            ty = self.type()
            self.expect(".")
            return Mu(a, ty, self.term())
        if self.at("[") and self.peek().kind == "ident":
            self.i += 1
            a1 = self.ident()
            if self.at(","):
                self.i += 1
                a2 = self.ident()
                self.expect("]")
                return NamedPair(a1, a2, self.term())
            self.expect("]")
            return Named(a1, self.term())
        return self.app()

    def _starts_prefix(self) -> bool:
        t = self.tok
        if t.kind == "num":
            return True
        if t.kind == "ident":
            return t.text not in KEYWORDS or t.text in {
                "unit", "pi1", "pi2", "inj1", "inj2", "case", "focus", "unfocus",
                "not", "out", "unfold", "head", "tail", "compose"}
        return t.text in ("(", "<", "_")

    def app(self) -> Term:
        fn = self.prefix()
        while self._starts_prefix():
            fn = App(fn, self.prefix())
        return fn

    def prefix(self) -> Term:
        if self.at("pi1", "pi2"):
            j = int(self.tok.text[-1])
            self.i += 1
            return Proj(j, self.prefix())
        if self.at("inj1", "inj2"):
            j = int(self.tok.text[-1])
            self.i += 1
            self.expect("[")
            ty = self.type()
            self.expect("]")
            return Inj(j, ty, self.prefix())
        if self.at("out"):
            self.i += 1
            nu = self._brace_name()
            return Destr(nu, self.prefix())
        return self.atom()

    def _brace_name(self) -> str:
        self.expect("{")
        n = self.ident()
        self.expect("}")
        return n

    def _call(self, arity: int) -> list[Term]:
        self.expect("(")
        args = [self.term()]
        for _ in range(arity - 1):
            self.expect(",")
            args.append(self.term())
        self.expect(")")
        return args

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Numeral(int(t.text[1:]))
        if self.at("("):
            self.i += 1
            m = self.term()
            self.expect(")")
            return m
        if self.at("_"):
            self.i += 1
            return HOLE
        if self.at("<"):
            self.i += 1
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(">")
            return Pair(left, right)
        if self.at("unit"):
            self.i += 1
            return UNIT
        if self.at("case"):
            self.i += 1
            return Case(*self._call(2))
        if self.at("compose"):
            self.i += 1
            return Compose(*self._call(2))
        if self.at("focus"):
            self.i += 1
            return Focus(*self._call(1))
        if self.at("unfocus"):
            self.i += 1
            return Unfocus(*self._call(1))
        if self.at("not"):
            self.i += 1
            return NotF(*self._call(1))
        if self.at("head", "tail"):
            j = 1 if t.text == "head" else 2
            self.i += 1
            return Observe(self._brace_name(), j)
        if self.at("unfold"):
            self.i += 1
            self.expect("{")
            nu = self.ident()
            carrier = None
            if self.at(","):
                self.i += 1
                carrier = self.type()
            self.expect("}")
            (coalg,) = self._call(1)
            return Unfold(nu, carrier, coalg)
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.i += 1
            if t.text in self.consts and t.text not in self.bound:
                return Const(t.text)
            return Var(t.text)
        self.error(f"expected a term, found {t.text or 'end of input'!r}")

    # -- scripts
    def script(self) -> Script:
        out = Script()
        while self.tok.kind != "eof":
            out.decls.append(self.declaration())
        return out

    def declaration(self) -> Declaration:
        start = self.tok
        span = (start.line, start.col)
        if self.at("type"):
            self.i += 1
            name = self.ident()
            self.expect("=")
            ty = self.type()
            self.expect(";")
            self.aliases[name] = ty
            return TypeAlias(name, ty, span)
        if self.at("nu"):
            self.i += 1
            name = self.ident()
            self.expect("(")
            var = self.ident()
            self.expect(")")
            self.expect("=")
            self.nus.add(name)
            self.tvars = {var}
            try:
                body = self.type()
            finally:
                self.tvars = set()
            self.expect(";")
            return NuDeclaration(NuDecl(name, var, body), span)
        if self.at("const"):
            self.i += 1
            name = self.ident()
            self.expect(":")
            ty = self.type()
            self.expect(";")
            self.consts.add(name)
            return ConstDecl(name, ty, span)
        if self.at("def"):
            self.i += 1
            name = self.ident()
            ty = None
            if self.at(":"):
                self.i += 1
                ty = self.type()
            self.expect("=")
            body = self.term()
            self.expect(";")
            return Definition(name, ty, body, span)
        if self.at("assert"):
            self.i += 1
            first = self.i
            a = self.assertion(span)
            src = self._source(self.toks[first], self.toks[self.i])
            self.expect(";")
            return Assertion(a.kind, a.terms, a.span, a.ty, a.env, a.cenv, src)
        self.error(f"expected a declaration, found {start.text or 'end of input'!r}")

    def assertion(self, span: Span) -> Assertion:
        env: list[tuple[str, Type]] = []
        cenv: list[tuple[str, Type]] = []
        if self.at("forall"):
            self.i += 1
            while True:
                if self.at("["):
                    self.i += 1
                    a = self.ident()
                    self.expect("]")
                    self.expect(":")
                    cenv.append((a, self.type()))
                else:
                    x = self.ident()
                    self.expect(":")
                    env.append((x, self.type()))
                if self.at(","):
                    self.i += 1
                    continue
                break
            self.expect(".")
        self.bound.extend(x for x, _ in env)
        try:
            kind, terms, ty = self._assertion_body()
        finally:
            del self.bound[len(self.bound) - len(env):]
        return Assertion(kind, terms, span, ty, tuple(env), tuple(cenv))

    def _assertion_body(self):
        if self.at("check"):
            self.i += 1
            m = self.term()
            self.expect(":")
            return "check", (m,), self.type()
        if self.at("focal", "nonfocal"):
            kind = self.tok.text
            self.i += 1
            return kind, (self.term(),), None
        oracle = False
        if self.at("oracle"):
            self.i += 1
            oracle = True
        left = self.term()
        if self.at("=="):
            kind = "equal"
        elif self.at("!="):
            kind = "distinct"
        else:
            self.error("expected '==' or '!='")
        self.i += 1
        right = self.term()
        return ("oracle-" + kind if oracle else kind), (left, right), None


def parse_type(text: str, aliases: Optional[dict[str, Type]] = None,
               nus: Iterable[str] = (), tvars: Iterable[str] = ()) -> Type:
    p = Parser(text, aliases=aliases, nus=nus)
    p.tvars = set(tvars)
    t = p.type()
    p.done()
    return t


def parse_term(text: str, consts: Iterable[str] = (),
               aliases: Optional[dict[str, Type]] = None, nus: Iterable[str] = ()) -> Term:
    """Parse one term. Identifiers listed in ``consts`` become constants unless bound."""
    p = Parser(text, consts=consts, aliases=aliases, nus=nus)
    m = p.term()
    p.done()
    return m


def parse_script(text: str) -> Script:
    return Parser(text).script()
