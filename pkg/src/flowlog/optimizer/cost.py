"""Join-project plans derived from a rooted JST, and their structural cost.

A plan is built bottom-up: each node scans its atom (with the semijoin
atoms it absorbs), then joins in the result of each child subtree in atom
order. Filters and antijoins run at the first step where all of their
variables are present, and after every step the variables that nothing
outside the covered atoms needs are projected away. The cost of a step
is the number of distinct variables it touches; the plan costs the max.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..errors import SearchSpaceExceeded
from ..frontend.ast import Constraint
from ..frontend.catalog import CatalogEntry
from .joingraph import DEFAULT_CAP, RootedJST, build_join_graph, enumerate_rooted_jsts


@dataclass
class PlanStep:
    kind: str  # "scan" or "join"
    vars: tuple[str, ...]  # before projection
    out: tuple[str, ...]  # after filters, antijoins and projection
    atom: int | None = None
    semijoins: tuple[int, ...] = ()
    left: "PlanStep | None" = None
    right: "PlanStep | None" = None
    keys: tuple[str, ...] = ()
    filters: tuple[Constraint, ...] = ()
    antijoins: tuple[int, ...] = ()
    id: int = -1

    def walk(self) -> Iterator["PlanStep"]:
        """Steps in execution (post) order."""
        if self.left is not None:
            yield from self.left.walk()
        if self.right is not None:
            yield from self.right.walk()
        yield self


@dataclass(frozen=True)
class PlanCost:
    per_step: tuple[tuple[int, int], ...]
    total: int


@dataclass
class _Pending:
    filters: list[Constraint] = field(default_factory=list)
    antijoins: list[int] = field(default_factory=list)


class _Walker:
    def __init__(self, tree: RootedJST, entry: CatalogEntry):
        self.tree = tree
        self.entry = entry
        rule = entry.rule
        order: dict[str, int] = {}
        for v in rule.head_vars():
            order.setdefault(v, len(order))
        for a in rule.body:
            for v in a.variables():
                order.setdefault(v, len(order))
        self.order = order
        self.head = set(rule.head_vars())
        self.nodes = list(entry.nodes)
        self.pending = _Pending(
            filters=[c for c, _ in entry.filters],
            antijoins=list(entry.antijoins),
        )
        self.next_id = 0

    def sort(self, names) -> tuple[str, ...]:
        return tuple(sorted(set(names), key=self.order.__getitem__))

    def needed_outside(self, covered: set[int]) -> set[str]:
        need = set(self.head)
        for n in self.nodes:
            if n not in covered:
                need |= self.entry.atom_vars[n]
        for c in self.pending.filters:
            need |= c.var_set()
        for a in self.pending.antijoins:
            need |= self.entry.atom_vars[a]
        return need

    def finish(self, step: PlanStep, covered: set[int]) -> PlanStep:
        available = set(step.vars)
        ready = [c for c in self.pending.filters if c.var_set() <= available]
        anti = [a for a in self.pending.antijoins if self.entry.atom_vars[a] <= available]
        for c in ready:
            self.pending.filters.remove(c)
        for a in anti:
            self.pending.antijoins.remove(a)
        step.filters = tuple(ready)
        step.antijoins = tuple(anti)
        step.out = self.sort(available & self.needed_outside(covered))
        step.id = self.next_id
        self.next_id += 1
        return step

    def build(self, node: int) -> tuple[PlanStep, set[int]]:
        atom_vars = self.entry.atom_vars[node]
        semis = tuple(sorted(s for s, host in self.entry.semijoins.items() if host == node))
        covered = {node}
        acc = self.finish(PlanStep("scan", self.sort(atom_vars), (), atom=node, semijoins=semis), covered)
        for child in self.tree.children_of(node):
            sub, sub_cov = self.build(child)
            acc, covered = self.join(acc, covered, sub, sub_cov)
        return acc, covered

    def join(self, left: PlanStep, lcov: set[int], right: PlanStep, rcov: set[int]):
        covered = lcov | rcov
        keys = self.sort(set(left.out) & set(right.out))
        step = PlanStep("join", self.sort(set(left.out) | set(right.out)), (), left=left, right=right, keys=keys)
        return self.finish(step, covered), covered

    def run(self) -> PlanStep:
        acc, covered = self.build(self.tree.roots[0])
        for r in self.tree.roots[1:]:
            sub, sub_cov = self.build(r)
            acc, covered = self.join(acc, covered, sub, sub_cov)
        assert not self.pending.filters and not self.pending.antijoins
        return acc


def build_plan(tree: RootedJST, entry: CatalogEntry) -> PlanStep:
    return _Walker(tree, entry).run()


def plan_cost(tree: RootedJST, entry: CatalogEntry) -> PlanCost:
    steps = list(build_plan(tree, entry).walk())
    per_step = tuple((s.id, len(s.vars)) for s in steps)
    return PlanCost(per_step, max(c for _, c in per_step))


def listing_order_plan(entry: CatalogEntry) -> RootedJST:
    """The body order as a left-deep plan: a chain rooted at the last atom."""
    nodes = list(entry.nodes)
    parent = {nodes[i]: nodes[i + 1] for i in range(len(nodes) - 1)}
    return RootedJST((nodes[-1],), parent, tuple((nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1)))


@dataclass(frozen=True)
class PlanChoice:
    tree: RootedJST
    cost: PlanCost
    candidates: tuple[tuple[RootedJST, int], ...]
    fallback: str | None = None  # why the listing order was used, if it was


def select_plan(entry: CatalogEntry, cap: int = DEFAULT_CAP) -> PlanChoice:
    """Cheapest rooted JST; ties go to the shallower tree, then the smaller encoding.

    The listing order is kept when the search space exceeds ``cap`` or when
    it is strictly cheaper than every rooted JST.
    """
    listing = listing_order_plan(entry)
    listing_cost = plan_cost(listing, entry)
    try:
        trees = enumerate_rooted_jsts(build_join_graph(entry), cap)
    except SearchSpaceExceeded:
        return PlanChoice(listing, listing_cost, (), fallback="search space exceeded")
    scored = [(t, plan_cost(t, entry)) for t in trees]
    best, best_cost = min(scored, key=lambda tc: (tc[1].total, tc[0].depth, tc[0].encoding()))
    candidates = tuple((t, c.total) for t, c in scored)
    if listing_cost.total < best_cost.total:
        return PlanChoice(listing, listing_cost, candidates, fallback="listing order is cheaper")
    return PlanChoice(best, best_cost, candidates)
