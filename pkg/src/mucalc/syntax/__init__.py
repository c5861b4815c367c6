"""Syntax of the lambda-mu calculus: AST, parser, printer, substitutions, sugar."""
from mucalc.syntax.ast import *  # noqa: F401,F403
from mucalc.syntax.ast import Signature, NuDecl, Term, Type
from mucalc.syntax.names import (
    all_names, children, contains_coinductive, free_cvars, free_vars, fresh,
    hole_count, is_closed, subterms,
)
from mucalc.syntax.subst import (
    ContextError, alpha_eq, fill, rename_cvar, rename_var, struct_subst, subst_term,
)
from mucalc.syntax.printer import pretty, pretty_type
from mucalc.syntax.parser import (
    Assertion, ConstDecl, Definition, NuDeclaration, ParseError, Script, TypeAlias,
    parse_script, parse_term, parse_type,
)
from mucalc.syntax.elaborate import ElaborationError, elaborate
