"""Naive bottom-up evaluation.

Deliberately simple and independent of the optimizer, planner and engine:
every round re-derives all facts from everything known so far, joining
body atoms with nested loops in listing order.
"""

from __future__ import annotations

from ..frontend.ast import LATTICE_AGGREGATES, Atom, Const, Program, Rule, Var, compare
from ..frontend.depgraph import stratify_program


class _Round:
    """Relations frozen for one round, with lazily built hash indexes."""

    def __init__(self, facts: dict[str, set[tuple]]):
        self.facts = facts
        self.indexes: dict[tuple[str, tuple[int, ...]], dict[tuple, list[tuple]]] = {}

    def lookup(self, relation: str, positions: tuple[int, ...], key: tuple) -> list[tuple]:
        idx = self.indexes.get((relation, positions))
        if idx is None:
            idx = {}
            for t in self.facts.get(relation, ()):
                idx.setdefault(tuple(t[p] for p in positions), []).append(t)
            self.indexes[(relation, positions)] = idx
        return idx.get(key, [])


def _value(term, env):
    return term.value if isinstance(term, Const) else env[term.name]


def _bindings(rule: Rule, rnd: _Round) -> list[dict[str, int]]:
    envs: list[dict[str, int]] = [{}]
    bound: set[str] = set()
    for atom in rule.body:
        if atom.negated:
            continue
        positions = tuple(
            i for i, t in enumerate(atom.terms) if isinstance(t, Const) or (isinstance(t, Var) and t.name in bound)
        )
        nxt = []
        for env in envs:
            key = tuple(_value(atom.terms[i], env) for i in positions)
            for t in rnd.lookup(atom.relation, positions, key):
                extended = _extend(atom, t, env)
                if extended is not None:
                    nxt.append(extended)
        envs = nxt
        bound |= atom.var_set()
    out = []
    for env in envs:
        if not all(compare(c.op, _value(c.left, env), _value(c.right, env)) for c in rule.constraints):
            continue
        if any(_holds(a, env, rnd) for a in rule.body if a.negated):
            continue
        out.append(env)
    return out


def _extend(atom: Atom, t: tuple, env: dict[str, int]) -> dict[str, int] | None:
    new = dict(env)
    for term, v in zip(atom.terms, t):
        if isinstance(term, Var):
            if new.setdefault(term.name, v) != v:
                return None
        elif isinstance(term, Const) and term.value != v:
            return None
    return new


def _holds(atom: Atom, env: dict[str, int], rnd: _Round) -> bool:
    positions = tuple(i for i, t in enumerate(atom.terms) if not isinstance(t, Var) or t.name in env)
    key = tuple(_value(atom.terms[i], env) for i in positions)
    return any(_extend(atom, t, env) is not None for t in rnd.lookup(atom.relation, positions, key))


def _head_fact(rule: Rule, env: dict[str, int]) -> tuple:
    row = []
    for i, t in enumerate(rule.head.terms):
        if rule.aggregate is not None and i == rule.aggregate.position:
            row.append(sum(_value(o, env) for o in rule.aggregate.over))
        else:
            row.append(_value(t, env))
    return tuple(row)


def _contribution(rule: Rule, env: dict[str, int]) -> tuple[tuple, tuple]:
    agg = rule.aggregate
    group = tuple(_value(t, env) for i, t in enumerate(rule.head.terms) if i != agg.position)
    return group, tuple(_value(o, env) for o in agg.over)


def naive_evaluate(program: Program, inputs: dict[str, set | list]) -> dict[str, set[tuple]]:
    """Fixpoint of ``program`` over ``inputs``; lattice relations map to ``group + (value,)`` rows."""
    strat = stratify_program(program)
    facts: dict[str, set[tuple]] = {name: set() for name in program.relations}
    for name, rows in inputs.items():
        facts.setdefault(name, set()).update(tuple(r) for r in rows)
    for atom in program.facts:
        facts.setdefault(atom.relation, set()).add(tuple(t.value for t in atom.terms))

    lattice: dict[str, dict[tuple, int]] = {}
    for name in program.relations:
        fn = program.aggregate_of(name)
        if fn in LATTICE_AGGREGATES:
            lattice[name] = {}
            for row in facts[name]:
                _improve(lattice[name], fn, row[:-1], row[-1])
            facts[name] = {g + (v,) for g, v in lattice[name].items()}
    contributions: dict[str, set[tuple]] = {}

    for scc in strat.strata:
        rules = [program.rule(r) for r in sorted(scc)]
        while True:
            rnd = _Round({k: set(v) for k, v in facts.items()})
            changed = False
            for rule in rules:
                rel = rule.head.relation
                fn = rule.aggregate.function if rule.aggregate else None
                for env in _bindings(rule, rnd):
                    if fn in ("COUNT", "SUM"):
                        c = _contribution(rule, env)
                        bucket = contributions.setdefault(rel, set())
                        if c not in bucket:
                            bucket.add(c)
                            changed = True
                    elif fn in LATTICE_AGGREGATES:
                        row = _head_fact(rule, env)
                        changed |= _improve(lattice[rel], fn, row[:-1], row[-1])
                    else:
                        row = _head_fact(rule, env)
                        if row not in facts[rel]:
                            facts[rel].add(row)
                            changed = True
            for rel in {r.head.relation for r in rules}:
                fn = program.aggregate_of(rel)
                if fn in LATTICE_AGGREGATES:
                    facts[rel] = {g + (v,) for g, v in lattice[rel].items()}
                elif fn in ("COUNT", "SUM"):
                    facts[rel] = _aggregate(contributions.get(rel, set()), fn)
            if not changed:
                break
    return {name: facts.get(name, set()) for name in program.output_relations()}


def _improve(table: dict[tuple, int], fn: str, group: tuple, value: int) -> bool:
    old = table.get(group)
    better = old is None or (value < old if fn == "MIN" else value > old)
    if better:
        table[group] = value
    return better


def _aggregate(contributions: set[tuple], fn: str) -> set[tuple]:
    acc: dict[tuple, int] = {}
    for group, over in contributions:
        if fn == "COUNT":
            acc[group] = acc.get(group, 0) + 1
        else:
            acc[group] = acc.get(group, 0) + sum(over)
    return {g + (v,) for g, v in acc.items()}
