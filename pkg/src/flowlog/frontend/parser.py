"""Parser for a Souffle-flavoured Datalog subset.

Supported: ``.decl``, ``.input``, ``.output``, ground facts, rules with
negated atoms (``!R(..)``), comparisons and head aggregates
``MIN/MAX/COUNT/SUM``. Comments use ``//`` or ``/* */``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ArityMismatch, DatalogSyntaxError, UndeclaredRelation, UnsafeRule, ValidationError
from .ast import (
    AGGREGATES,
    AggregateSpec,
    Atom,
    Const,
    Constraint,
    Placeholder,
    Program,
    RelationDecl,
    Rule,
    Term,
    Var,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*|\#[^\n]*)
  | (?P<block>/\*.*?\*/)
  | (?P<directive>\.(?:decl|input|output)\b)
  | (?P<arrow>:-)
  | (?P<op><=|>=|!=|≠|≤|≥|<|>|=)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(),.:!¬+])
    """,
    re.VERBOSE | re.DOTALL,
)

_UNICODE_OPS = {"≠": "!=", "≤": "<=", "≥": ">="}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DatalogSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "block":
            newlines = value.count("\n")
            if newlines:
                line += newlines
                line_start = pos + value.rfind("\n") + 1
        elif kind not in ("ws", "comment"):
            if kind == "op":
                value = _UNICODE_OPS.get(value, value)
            if value == "¬":
                value = "!"
            tokens.append(Token(kind, value, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.decls: dict[str, RelationDecl] = {}
        self.decl_lines: dict[str, int] = {}
        self.inputs: list[str] = []
        self.outputs: list[str] = []
        self.facts: list[tuple[Atom, int]] = []
        self.rules: list[Rule] = []

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None) -> DatalogSyntaxError:
        tok = tok or self.tok
        found = tok.text or "end of input"
        return DatalogSyntaxError(f"{message} (found {found!r})", tok.line, tok.column)

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            raise self.error(f"expected {text!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.error("expected identifier")
        return self.advance()

    def parse(self) -> None:
        while self.tok.kind != "eof":
            if self.tok.kind == "directive":
                self.directive()
            else:
                self.clause()

    def directive(self) -> None:
        tok = self.advance()
        if tok.text == ".decl":
            name = self.expect_ident()
            self.expect("(")
            cols: list[tuple[str, str]] = []
            if self.tok.text != ")":
                while True:
                    attr = self.expect_ident().text
                    ty = "number"
                    if self.tok.text == ":":
                        self.advance()
                        ty = self.expect_ident().text
                    cols.append((attr, ty))
                    if self.tok.text != ",":
                        break
                    self.advance()
            self.expect(")")
            if name.text in self.decls:
                raise ValidationError(f"relation {name.text!r} declared twice", line=name.line)
            self.decls[name.text] = RelationDecl(name.text, tuple(cols))
            self.decl_lines[name.text] = name.line
            return
        target = self.inputs if tok.text == ".input" else self.outputs
        while True:
            target.append(self.expect_ident().text)
            if self.tok.text != ",":
                break
            self.advance()

    def term(self) -> Term:
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return Const(int(tok.text))
        if tok.kind == "ident":
            self.advance()
            return Placeholder() if tok.text == "_" else Var(tok.text)
        raise self.error("expected a term")

    def atom(self, negated: bool = False) -> Atom:
        name = self.expect_ident()
        self.expect("(")
        terms: list[Term] = []
        if self.tok.text != ")":
            while True:
                terms.append(self.term())
                if self.tok.text != ",":
                    break
                self.advance()
        self.expect(")")
        return Atom(name.text, tuple(terms), negated)

    def head(self) -> tuple[Atom, AggregateSpec | None]:
        name = self.expect_ident()
        self.expect("(")
        terms: list[Term] = []
        agg: AggregateSpec | None = None
        if self.tok.text != ")":
            while True:
                tok = self.tok
                nxt = self.tokens[self.i + 1]
                if tok.kind == "ident" and tok.text.upper() in AGGREGATES and nxt.text == "(":
                    if agg is not None:
                        raise self.error("only one aggregate per head")
                    self.advance()
                    self.advance()
                    over = [self.term()]
                    while self.tok.text == "+":
                        self.advance()
                        over.append(self.term())
                    self.expect(")")
                    agg = AggregateSpec(tok.text.upper(), tuple(over), len(terms))
                    terms.append(Placeholder())
                else:
                    terms.append(self.term())
                if self.tok.text != ",":
                    break
                self.advance()
        self.expect(")")
        return Atom(name.text, tuple(terms)), agg

    def clause(self) -> None:
        start = self.tok
        if start.kind != "ident":
            raise self.error("expected a rule, fact or directive")
        head, agg = self.head()
        if self.tok.text == ".":
            self.advance()
            if agg is not None or not all(isinstance(t, Const) for t in head.terms):
                raise UnsafeRule("facts must be ground", line=start.line)
            self.facts.append((head, start.line))
            return
        self.expect(":-")
        body: list[Atom] = []
        constraints: list[Constraint] = []
        while True:
            if self.tok.text == "!":
                self.advance()
                body.append(self.atom(negated=True))
            elif self.tok.kind == "ident" and self.tokens[self.i + 1].text == "(":
                body.append(self.atom())
            else:
                left = self.term()
                if self.tok.kind != "op":
                    raise self.error("expected a comparison operator")
                op = self.advance().text
                constraints.append(Constraint(left, op, self.term()))
            if self.tok.text != ",":
                break
            self.advance()
        self.expect(".")
        rule_id = len(self.rules) + 1
        self.rules.append(Rule(rule_id, head, tuple(body), tuple(constraints), agg, line=start.line))


def parse_program(text: str) -> Program:
    """Parse and validate Datalog source text."""
    p = _Parser(text)
    p.parse()
    program = Program(
        relations=dict(p.decls),
        rules=tuple(p.rules),
        inputs=tuple(p.inputs),
        outputs=tuple(p.outputs),
        facts=tuple(f for f, _ in p.facts),
    )
    validate(program, fact_lines=[ln for _, ln in p.facts])
    return program


def _check_atom(program: Program, atom: Atom, rule_id: int | None, line: int) -> None:
    decl = program.relations.get(atom.relation)
    if decl is None:
        raise UndeclaredRelation(f"relation {atom.relation!r} is not declared", rule_id, line)
    if decl.arity != atom.arity:
        raise ArityMismatch(
            f"{atom.relation} has arity {decl.arity} but is used with {atom.arity} arguments", rule_id, line
        )


def validate(program: Program, fact_lines: list[int] | None = None) -> None:
    """Static checks: declarations, arity, range restriction and safety."""
    for name in (*program.inputs, *program.outputs):
        if name not in program.relations:
            raise UndeclaredRelation(f"directive names undeclared relation {name!r}")
    for k, fact in enumerate(program.facts):
        _check_atom(program, fact, None, (fact_lines or [0] * len(program.facts))[k])
    idbs = program.idbs
    for name in program.inputs:
        if name in idbs:
            raise ValidationError(f"input relation {name!r} cannot be the head of a rule")
    agg_fn: dict[str, str | None] = {}
    for rule in program.rules:
        rid, line = rule.id, rule.line
        _check_atom(program, rule.head, rid, line)
        for a in rule.body:
            _check_atom(program, a, rid, line)
        if not rule.positive:
            raise UnsafeRule("rule body needs at least one positive atom", rid, line)
        bound = set().union(*(a.var_set() for a in rule.positive))
        for t in rule.head.terms:
            if isinstance(t, Var) and t.name not in bound:
                raise UnsafeRule(f"head variable {t.name!r} does not occur in a positive body atom", rid, line)
        if rule.aggregate is not None:
            if rule.aggregate.position != rule.head.arity - 1:
                raise ValidationError("the aggregate must be the last head column", rid, line)
            for v in rule.aggregate.variables():
                if v not in bound:
                    raise UnsafeRule(f"aggregated variable {v!r} is not bound", rid, line)
            if rule.aggregate.function == "COUNT" and len(rule.aggregate.over) != 1:
                raise ValidationError("COUNT takes a single term", rid, line)
        agg_pos = rule.aggregate.position if rule.aggregate else -1
        if any(isinstance(t, Placeholder) for i, t in enumerate(rule.head.terms) if i != agg_pos):
            raise UnsafeRule("placeholder '_' in rule head", rid, line)
        for a in rule.negative:
            for v in a.var_set():
                if v not in bound:
                    raise UnsafeRule(f"variable {v!r} of negated atom {a} is not bound", rid, line)
        for c in rule.constraints:
            if not c.var_set():
                raise ValidationError(f"constraint {c} has no variable", rid, line)
            for v in c.var_set():
                if v not in bound:
                    raise UnsafeRule(f"variable {v!r} of constraint {c} is not bound", rid, line)
        fn = rule.aggregate.function if rule.aggregate else None
        rel = rule.head.relation
        if rel in agg_fn and agg_fn[rel] != fn:
            raise ValidationError(f"rules for {rel!r} disagree on aggregation", rid, line)
        agg_fn[rel] = fn
