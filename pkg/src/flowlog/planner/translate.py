"""Lower a join-project plan to the relational IR.

The output is deliberately unfused: every re-key, filter and projection is
its own FlatMap, so fusion has something to do and can be toggled off.
"""

from __future__ import annotations

from dataclasses import replace

from ..frontend.ast import Atom, Const, Rule, Var
from ..frontend.catalog import CatalogEntry
from ..optimizer.cost import PlanStep
from .ir import DELTA, EDB, FULL, SCAN, Filter, IRNode, antijoin, flat_map, join, scan


def variable_order(rule: Rule) -> dict[str, int]:
    order: dict[str, int] = {}
    for v in rule.head_vars():
        order.setdefault(v, len(order))
    for a in rule.body:
        for v in a.variables():
            order.setdefault(v, len(order))
    return order


def _operand(term) -> str | Const:
    return term.name if isinstance(term, Var) else term


class _Translator:
    def __init__(self, entry: CatalogEntry, roles: dict[int, str]):
        self.entry = entry
        self.rule = entry.rule
        self.roles = roles
        self.order = variable_order(self.rule)

    def sort(self, names) -> tuple[str, ...]:
        return tuple(sorted(set(names), key=self.order.__getitem__))

    def leaf(self, index: int, key: tuple[str, ...], value: tuple[str, ...]) -> IRNode:
        atom: Atom = self.rule.body[index]
        node = scan(atom.relation, atom.arity, self.roles.get(index, EDB), atom=index)
        first: dict[str, str] = {}
        filters = []
        for pos, t in enumerate(atom.terms):
            col = f"${pos}"
            if isinstance(t, Const):
                filters.append(Filter(col, "=", t))
            elif isinstance(t, Var):
                if t.name in first:
                    filters.append(Filter(col, "=", first[t.name]))
                else:
                    first[t.name] = col
        if filters:
            used = sorted((first[v] for v in key + value), key=lambda c: int(c[1:]))
            node = flat_map(node, (), tuple(used), filters=filters)
        projection = [first[v] for v in key + value]
        return flat_map(node, key, value, projection=projection)

    def rekey(self, node: IRNode, keys: tuple[str, ...], keep: set[str] | None = None) -> IRNode:
        rest = tuple(c for c in node.schema.columns if c not in keys and (keep is None or c in keep))
        if node.schema.key == keys and node.schema.value == rest:
            return node
        return flat_map(node, keys, rest)

    def step(self, s: PlanStep) -> IRNode:
        vs = self.entry.atom_vars
        if s.kind == "scan":
            later = set(s.out)
            for c in s.filters:
                later |= c.var_set()
            for a in s.antijoins:
                later |= vs[a]

            def keep(k: int) -> set[str]:
                # variables still needed from the k-th semijoin on
                return later.union(*(vs[a] for a in s.semijoins[k:]))

            acc = self.leaf(s.atom, (), self.sort(keep(0) & set(s.vars)))
            for k, semi in enumerate(s.semijoins):
                keys = self.sort(vs[semi])
                acc = join(self.rekey(acc, keys, keep(k)), self.leaf(semi, keys, ()), keys)
        else:
            keys = s.keys
            acc = join(self.rekey(self.step(s.left), keys), self.rekey(self.step(s.right), keys), keys)
        after = set(s.out).union(*(vs[a] for a in s.antijoins))
        if s.filters:
            filters = [Filter(_operand(c.left), c.op, _operand(c.right)) for c in s.filters]
            acc = flat_map(acc, (), self.sort(after & set(acc.schema.columns)), filters=filters)
        for k, neg in enumerate(s.antijoins):
            keys = self.sort(vs[neg])
            keep = set(s.out).union(*(vs[a] for a in s.antijoins[k + 1 :]))
            acc = antijoin(self.rekey(acc, keys, keep), self.leaf(neg, keys, ()), keys)
        if acc.schema.key or acc.schema.value != s.out:
            acc = flat_map(acc, (), s.out)
        return acc


def base_roles(entry: CatalogEntry, edbs: set[str]) -> dict[int, str]:
    """Base-variant role per body atom: EDB scans or full IDB scans."""
    return {i: (EDB if a.relation in edbs else FULL) for i, a in enumerate(entry.rule.body)}


def translate_jst_to_ir(plan: PlanStep, entry: CatalogEntry, roles: dict[int, str] | None = None) -> IRNode:
    """IR for one rule; the root emits the rule's head variables, unkeyed."""
    t = _Translator(entry, roles or {})
    root = t.step(plan)
    head = tuple(entry.rule.head_vars())
    if root.schema.key or root.schema.value != head:
        root = flat_map(root, (), head)
    return root


def with_delta(node: IRNode, atom: int) -> IRNode:
    """The same IR with the scan of body atom ``atom`` reading the delta."""
    if node.kind == SCAN:
        return replace(node, role=DELTA) if node.atom == atom else node
    return node.with_children(with_delta(c, atom) for c in node.children)


def delta_variants(ir: IRNode, entry: CatalogEntry) -> dict[int, IRNode]:
    """Variant 0 is the base plan; variant k+1 reads the delta at the k-th recursive atom."""
    out = {0: ir}
    for k, atom in enumerate(sorted(entry.recursive_atoms)):
        out[k + 1] = with_delta(ir, atom)
    return out
