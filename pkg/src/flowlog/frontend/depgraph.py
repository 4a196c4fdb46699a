"""Rule dependency graph and SCC stratification."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from ..errors import UnstratifiableProgram
from .ast import LATTICE_AGGREGATES, Program


def build_dependency_graph(program: Program) -> nx.DiGraph:
    """Edge ``r1 -> r2`` iff the head relation of r1 occurs in the body of r2.

    An edge carries ``negated_or_aggregated=True`` when the occurrence is
    negated or feeds a COUNT/SUM head. MIN/MAX heads are lattice-monotone
    and may recurse, so they do not set the flag.
    """
    g = nx.DiGraph()
    g.add_nodes_from(r.id for r in program.rules)
    by_head: dict[str, list[int]] = {}
    for r in program.rules:
        by_head.setdefault(r.head.relation, []).append(r.id)
    for r2 in program.rules:
        non_monotone_head = r2.aggregate is not None and r2.aggregate.function not in LATTICE_AGGREGATES
        for atom in r2.body:
            flag = atom.negated or non_monotone_head
            for r1 in by_head.get(atom.relation, ()):
                if g.has_edge(r1, r2.id):
                    g[r1][r2.id]["negated_or_aggregated"] |= flag
                else:
                    g.add_edge(r1, r2.id, negated_or_aggregated=flag)
    return g


@dataclass(frozen=True)
class Stratification:
    strata: tuple[frozenset[int], ...]
    stratum_of: dict[str, int]
    recursive: frozenset[int]

    def is_recursive(self, rule_id: int) -> bool:
        return rule_id in self.recursive

    def recursive_relations(self, program: Program, index: int) -> set[str]:
        """Relations headed in stratum ``index`` by a recursive rule."""
        return {
            program.rule(rid).head.relation for rid in self.strata[index] if rid in self.recursive
        }


def stratify(graph: nx.DiGraph, program: Program | None = None) -> Stratification:
    """Condense SCCs and order them topologically (ties by smallest rule id)."""
    cond = nx.condensation(graph)
    members = {c: frozenset(cond.nodes[c]["members"]) for c in cond.nodes}
    for u, v, data in graph.edges(data=True):
        if data.get("negated_or_aggregated") and cond.graph["mapping"][u] == cond.graph["mapping"][v]:
            raise UnstratifiableProgram(
                f"rules r{u} and r{v} depend on each other through negation or aggregation"
            )
    order = nx.lexicographical_topological_sort(cond, key=lambda c: min(members[c]))
    strata = tuple(members[c] for c in order)
    recursive = set()
    for scc in strata:
        if len(scc) > 1:
            recursive |= scc
        else:
            (rid,) = scc
            if graph.has_edge(rid, rid):
                recursive.add(rid)
    stratum_of: dict[str, int] = {}
    if program is not None:
        for i, scc in enumerate(strata):
            for rid in scc:
                stratum_of[program.rule(rid).head.relation] = i
    return Stratification(strata, stratum_of, frozenset(recursive))


def stratify_program(program: Program) -> Stratification:
    return stratify(build_dependency_graph(program), program)
