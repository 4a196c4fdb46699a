"""Datalog syntax tree.

Everything here is immutable so programs, rules and atoms can be hashed,
shared between planning passes and compared structurally in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Union

AGGREGATES = ("MIN", "MAX", "COUNT", "SUM")
LATTICE_AGGREGATES = ("MIN", "MAX")
COMPARISONS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Placeholder:
    def __str__(self) -> str:
        return "_"


Term = Union[Var, Const, Placeholder]


@dataclass(frozen=True)
class Atom:
    relation: str
    terms: tuple[Term, ...]
    negated: bool = False

    @property
    def arity(self) -> int:
        return len(self.terms)

    def variables(self) -> list[str]:
        """Variable names in first-occurrence order, without repeats."""
        seen: dict[str, None] = {}
        for t in self.terms:
            if isinstance(t, Var):
                seen.setdefault(t.name, None)
        return list(seen)

    def var_set(self) -> frozenset[str]:
        return frozenset(t.name for t in self.terms if isinstance(t, Var))

    def __str__(self) -> str:
        inner = ", ".join(str(t) for t in self.terms)
        return f"{'!' if self.negated else ''}{self.relation}({inner})"


@dataclass(frozen=True)
class AggregateSpec:
    """Head aggregate. ``over`` is summed, so ``MIN(d + w)`` is ``(d, w)``."""

    function: str
    over: tuple[Term, ...]
    position: int

    def variables(self) -> list[str]:
        return [t.name for t in self.over if isinstance(t, Var)]

    def __str__(self) -> str:
        return f"{self.function}({' + '.join(str(t) for t in self.over)})"


@dataclass(frozen=True)
class Constraint:
    left: Term
    op: str
    right: Term

    def var_set(self) -> frozenset[str]:
        return frozenset(t.name for t in (self.left, self.right) if isinstance(t, Var))

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


def compare(op: str, a: int, b: int) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise ValueError(f"unknown comparison {op!r}")


@dataclass(frozen=True)
class Rule:
    id: int
    head: Atom
    body: tuple[Atom, ...]
    constraints: tuple[Constraint, ...] = ()
    aggregate: AggregateSpec | None = None
    line: int = field(default=0, compare=False)
    # sip auxiliary rules are never rewritten again
    auxiliary: bool = field(default=False, compare=False)

    @property
    def positive(self) -> list[Atom]:
        return [a for a in self.body if not a.negated]

    @property
    def negative(self) -> list[Atom]:
        return [a for a in self.body if a.negated]

    def head_vars(self) -> list[str]:
        """Variables the head needs, aggregate inputs included."""
        seen: dict[str, None] = {}
        for i, t in enumerate(self.head.terms):
            if self.aggregate is not None and i == self.aggregate.position:
                for v in self.aggregate.variables():
                    seen.setdefault(v, None)
            elif isinstance(t, Var):
                seen.setdefault(t.name, None)
        return list(seen)

    def body_relations(self) -> set[str]:
        return {a.relation for a in self.body}

    def __str__(self) -> str:
        head_terms = []
        for i, t in enumerate(self.head.terms):
            if self.aggregate is not None and i == self.aggregate.position:
                head_terms.append(str(self.aggregate))
            else:
                head_terms.append(str(t))
        head = f"{self.head.relation}({', '.join(head_terms)})"
        parts = [str(a) for a in self.body] + [str(c) for c in self.constraints]
        return f"{head} :- {', '.join(parts)}."


@dataclass(frozen=True)
class RelationDecl:
    name: str
    columns: tuple[tuple[str, str], ...]  # (attribute name, type name)

    @property
    def arity(self) -> int:
        return len(self.columns)

    def symbol_columns(self) -> tuple[int, ...]:
        return tuple(i for i, (_, ty) in enumerate(self.columns) if ty == "symbol")

    def __str__(self) -> str:
        cols = ", ".join(f"{n}:{t}" for n, t in self.columns)
        return f".decl {self.name}({cols})"


@dataclass(frozen=True)
class Program:
    """A validated program.

    ``facts`` holds ground clauses from the source text (``edge(1, 2).``);
    they seed their relation without making it an IDB.
    """

    relations: dict[str, RelationDecl]
    rules: tuple[Rule, ...]
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()
    facts: tuple[Atom, ...] = ()

    @property
    def idbs(self) -> set[str]:
        return {r.head.relation for r in self.rules}

    @property
    def edbs(self) -> set[str]:
        heads = self.idbs
        return {n for n in self.relations if n not in heads}

    def kind(self, relation: str) -> str:
        return "IDB" if relation in self.idbs else "EDB"

    def arity(self, relation: str) -> int:
        return self.relations[relation].arity

    def rule(self, rule_id: int) -> Rule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    def rules_for(self, relation: str) -> list[Rule]:
        return [r for r in self.rules if r.head.relation == relation]

    def aggregate_of(self, relation: str) -> str | None:
        """The aggregate function shared by all rules heading ``relation``."""
        for r in self.rules_for(relation):
            if r.aggregate is not None:
                return r.aggregate.function
        return None

    def output_relations(self) -> list[str]:
        if self.outputs:
            return list(self.outputs)
        return sorted(self.idbs)

    def with_rules(self, rules: Iterable[Rule], extra: Iterable[RelationDecl] = ()) -> "Program":
        relations = dict(self.relations)
        for d in extra:
            relations[d.name] = d
        return replace(self, relations=relations, rules=tuple(rules))

    def to_source(self) -> str:
        lines = [str(d) for d in self.relations.values()]
        lines += [f".input {n}" for n in self.inputs]
        lines += [f".output {n}" for n in self.outputs]
        lines += [f"{f}." for f in self.facts]
        lines += [str(r) for r in self.rules]
        return "\n".join(lines) + ("\n" if lines else "")


def iter_terms(atoms: Iterable[Atom]) -> Iterator[Term]:
    for a in atoms:
        yield from a.terms
