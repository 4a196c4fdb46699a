from .ast import AggregateSpec, Atom, Const, Constraint, Placeholder, Program, RelationDecl, Rule, Term, Var
from .catalog import CatalogEntry, build_catalog, build_rule_catalog, classify_semijoins
from .depgraph import Stratification, build_dependency_graph, stratify, stratify_program
from .parser import parse_program, tokenize, validate

__all__ = [
    "AggregateSpec",
    "Atom",
    "CatalogEntry",
    "Const",
    "Constraint",
    "Placeholder",
    "Program",
    "RelationDecl",
    "Rule",
    "Stratification",
    "Term",
    "Var",
    "build_catalog",
    "build_dependency_graph",
    "build_rule_catalog",
    "classify_semijoins",
    "parse_program",
    "stratify",
    "stratify_program",
    "tokenize",
    "validate",
]
