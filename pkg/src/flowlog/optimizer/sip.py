"""Two-pass semijoin reduction expressed as Datalog rule rewriting.

Pass one walks the join graph in BFS order and reduces every atom by the
already-visited neighbours it shares variables with. Pass two walks back
in reverse order and reduces each atom again by its later-visited
neighbours. The rewritten rule then joins only the fully reduced atoms.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace

from ..errors import NotApplicable
from ..frontend.ast import Atom, Placeholder, Program, RelationDecl, Rule, Term, Var
from ..frontend.catalog import CatalogEntry, build_catalog
from ..frontend.depgraph import Stratification
from .joingraph import build_join_graph


@dataclass(frozen=True)
class SipRewrite:
    aux_rules: tuple[Rule, ...]
    reduced_rule: Rule
    decls: tuple[RelationDecl, ...]
    visit_order: tuple[int, ...]


def aux_name(rule_id: int, atom_index: int, pass_no: int) -> str:
    return f"__sip_{rule_id}_{atom_index}_{pass_no}"


def default_visit_order(entry: CatalogEntry) -> list[int]:
    """BFS from the atom with the most variables (ties: body order).

    Neighbours are queued in body order; disconnected parts restart from
    their own widest atom.
    """
    g = build_join_graph(entry)
    remaining = list(g.node_ids)
    order: list[int] = []
    while remaining:
        start = max(remaining, key=lambda n: (len(entry.atom_vars[n]), -n))
        queue, seen = deque([start]), {start}
        while queue:
            n = queue.popleft()
            order.append(n)
            remaining.remove(n)
            for m in g.neighbors(n):
                if m not in seen:
                    seen.add(m)
                    queue.append(m)
    return order


def _project(atom: Atom, relation: str, keep: frozenset[str]) -> Atom:
    terms = tuple(t if not isinstance(t, Var) or t.name in keep else Placeholder() for t in atom.terms)
    return Atom(relation, terms)


def sip_rewrite(
    rule: Rule,
    visit_order: list[int] | None = None,
    entry: CatalogEntry | None = None,
    program: Program | None = None,
) -> SipRewrite:
    from ..frontend.catalog import build_rule_catalog

    entry = entry or build_rule_catalog(rule)
    nodes = list(entry.nodes)
    if len(nodes) < 2:
        raise NotApplicable(f"rule r{rule.id} has fewer than two join atoms")
    order = list(visit_order) if visit_order is not None else default_visit_order(entry)
    if sorted(order) != sorted(nodes):
        raise ValueError(f"visit order {order} does not cover join atoms {nodes}")
    position = {n: k for k, n in enumerate(order)}
    vs = entry.atom_vars
    body = rule.body

    def neighbours(i: int) -> list[int]:
        return [j for j in nodes if j != i and vs[i] & vs[j]]

    # fresh head variables for placeholder positions of a reduced atom
    def head_terms(atom: Atom) -> tuple[Term, ...]:
        out, k = [], 0
        for t in atom.terms:
            if isinstance(t, Placeholder):
                out.append(Var(f"__h{k}"))
                k += 1
            else:
                out.append(t)
        return tuple(out)

    current = {i: body[i].relation for i in nodes}
    # aux rules need ids distinct from the program's own rules
    next_id = max((r.id for r in program.rules), default=rule.id) + 1 if program is not None else 0
    aux: list[Rule] = []
    decls: list[RelationDecl] = []

    def emit(i: int, pass_no: int, reducers: list[int], self_first: bool) -> None:
        name = aux_name(rule.id, i, pass_no)
        terms = head_terms(body[i])
        me = Atom(current[i], terms)
        parts = [_project(body[j], current[j], vs[i]) for j in reducers]
        new_body = (me, *parts) if self_first else (*parts, me)
        aux.append(Rule(next_id + len(aux) if next_id else 0, Atom(name, terms), tuple(new_body), auxiliary=True))
        cols = (
            program.relations[body[i].relation].columns
            if program is not None and body[i].relation in program.relations
            else tuple((f"c{k}", "number") for k in range(body[i].arity))
        )
        decls.append(RelationDecl(name, cols))
        current[i] = name

    for i in order[1:]:
        earlier = sorted((j for j in neighbours(i) if position[j] < position[i]), key=position.__getitem__)
        if earlier:
            emit(i, 1, earlier, self_first=False)
    for i in reversed(order[:-1]):
        later = sorted((j for j in neighbours(i) if position[j] > position[i]), key=lambda j: -position[j])
        if later:
            emit(i, 2, later, self_first=True)

    new_body = tuple(
        Atom(current[i], a.terms, a.negated) if i in current else a for i, a in enumerate(body)
    )
    reduced = replace(rule, body=new_body)
    return SipRewrite(tuple(aux), reduced, tuple(decls), tuple(order))


def apply_sip(
    program: Program,
    strat: Stratification,
    mode: str = "auto",
    catalog: dict[int, CatalogEntry] | None = None,
) -> tuple[Program, dict[int, SipRewrite]]:
    """Rewrite the program's rules.

    ``mode`` is ``"auto"`` (recursive rules with at least three join atoms),
    ``"on"`` (every rule with at least two) or ``"off"``.
    """
    if mode == "off":
        return program, {}
    catalog = catalog or build_catalog(program, strat)
    next_id = max((r.id for r in program.rules), default=0) + 1
    rules: list[Rule] = []
    extra: list[RelationDecl] = []
    rewrites: dict[int, SipRewrite] = {}
    for rule in program.rules:
        entry = catalog[rule.id]
        n = len(entry.nodes)
        eligible = not rule.auxiliary and (
            (mode == "on" and n >= 2) or (mode == "auto" and n >= 3 and strat.is_recursive(rule.id))
        )
        if not eligible:
            rules.append(rule)
            continue
        rw = sip_rewrite(rule, entry=entry, program=program)
        numbered = []
        for a in rw.aux_rules:
            numbered.append(replace(a, id=next_id, line=rule.line))
            next_id += 1
        rw = replace(rw, aux_rules=tuple(numbered))
        rewrites[rule.id] = rw
        rules.extend(numbered)
        rules.append(rw.reduced_rule)
        extra.extend(rw.decls)
    return program.with_rules(rules, extra), rewrites
