"""Per-rule catalog: the metadata the optimizer and planner work from."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import Constraint, Program, Rule
from .depgraph import Stratification


@dataclass(frozen=True)
class CatalogEntry:
    rule: Rule
    atom_vars: tuple[frozenset[str], ...]
    nodes: tuple[int, ...]
    semijoins: dict[int, int]
    filters: tuple[tuple[Constraint, tuple[int, ...]], ...]
    antijoins: tuple[int, ...]
    recursive_atoms: frozenset[int] = field(default_factory=frozenset)

    @property
    def head_vars(self) -> list[str]:
        return self.rule.head_vars()

    def vars_of(self, atom_index: int) -> frozenset[str]:
        return self.atom_vars[atom_index]


def _atom_key(rule: Rule, i: int) -> tuple:
    a = rule.body[i]
    return (a.relation, tuple(str(t) for t in a.terms))


def classify_semijoins(rule: Rule, recursive_atoms: frozenset[int] = frozenset()) -> dict[int, int]:
    """Map each semijoin atom to the join-graph atom that absorbs it.

    A positive atom is a semijoin atom when its variables are subsumed by
    another positive atom. Among atoms with identical variable sets the one
    with the smallest (relation, terms) key stays a join node, so the result
    does not depend on body order. Atoms recursive in the rule's own stratum
    always stay join nodes: they carry the delta in semi-naive evaluation.
    """
    pos = [i for i, a in enumerate(rule.body) if not a.negated]
    vs = {i: rule.body[i].var_set() for i in pos}

    def absorbs(b: int, a: int) -> bool:
        if b == a or not vs[a] <= vs[b]:
            return False
        if vs[a] < vs[b]:
            return True
        # equal variable sets: recursive atoms first, then the smaller key
        if (b in recursive_atoms) != (a in recursive_atoms):
            return b in recursive_atoms
        ka, kb = _atom_key(rule, a), _atom_key(rule, b)
        return kb < ka or (kb == ka and b < a)

    semi = {a for a in pos if a not in recursive_atoms and any(absorbs(b, a) for b in pos)}
    # a recursive atom could be the only absorber of an equal-set peer
    semi = {
        a for a in semi if any(absorbs(b, a) for b in pos if b not in semi)
    }
    attach: dict[int, int] = {}
    for a in sorted(semi):
        candidates = [b for b in pos if b not in semi and vs[a] <= vs[b] and b != a]
        best = max(candidates, key=lambda b: (len(vs[a] & vs[b]), -b))
        attach[a] = best
    return attach


def build_rule_catalog(
    rule: Rule,
    program: Program | None = None,
    strat: Stratification | None = None,
) -> CatalogEntry:
    recursive: set[int] = set()
    if program is not None and strat is not None:
        for scc in strat.strata:
            if rule.id in scc:
                same_stratum = {program.rule(r).head.relation for r in scc}
                if strat.is_recursive(rule.id):
                    recursive = {i for i, a in enumerate(rule.body) if not a.negated and a.relation in same_stratum}
                break
    recursive_atoms = frozenset(recursive)
    atom_vars = tuple(a.var_set() for a in rule.body)
    semijoins = classify_semijoins(rule, recursive_atoms)
    nodes = tuple(i for i, a in enumerate(rule.body) if not a.negated and i not in semijoins)
    filters = []
    for c in rule.constraints:
        owners = tuple(i for i in nodes if c.var_set() <= atom_vars[i])
        filters.append((c, owners))
    antijoins = tuple(i for i, a in enumerate(rule.body) if a.negated)
    return CatalogEntry(rule, atom_vars, nodes, semijoins, tuple(filters), antijoins, recursive_atoms)


def build_catalog(program: Program, strat: Stratification) -> dict[int, CatalogEntry]:
    return {r.id: build_rule_catalog(r, program, strat) for r in program.rules}
