"""Canonical encodings and cross-rule subplan sharing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..frontend.ast import Rule, Var
from .ir import ANTIJOIN, JOIN, REF, SCAN, IRNode, render, rename, shared_ref


def _encode(node: IRNode, resolve: Callable[[int], tuple] | None) -> tuple:
    if node.kind == REF:
        if resolve is None:
            raise ValueError("cannot encode a shared reference without its DAG")
        return resolve(node.ref)
    kids = tuple(_encode(c, resolve) for c in node.children)
    if node.kind == SCAN:
        return (SCAN, node.relation, node.role, node.arity)
    if node.kind in (JOIN, ANTIJOIN):
        return (node.kind, len(node.keys), kids)
    filters, projection = node.positional()
    return (node.kind, len(node.schema.key), filters, projection, len(node.keys), kids)


def canonicalize(ir: IRNode, resolve: Callable[[int], tuple] | None = None) -> bytes:
    """Injective byte encoding, positional and therefore rename-invariant."""
    return repr(_encode(ir, resolve)).encode()


@dataclass(frozen=True)
class HeadBinding:
    """How a root tuple (the rule's head variables) becomes a head fact."""

    relation: str
    columns: tuple[tuple, ...]  # ("col", i) | ("const", v) | ("agg",)
    aggregate: str | None = None
    aggregate_terms: tuple[tuple, ...] = ()  # summed operands, ("col", i) | ("const", v)

    @classmethod
    def of(cls, rule: Rule) -> "HeadBinding":
        index = {v: i for i, v in enumerate(rule.head_vars())}

        def operand(t):
            return ("col", index[t.name]) if isinstance(t, Var) else ("const", t.value)

        cols = []
        for i, t in enumerate(rule.head.terms):
            if rule.aggregate is not None and i == rule.aggregate.position:
                cols.append(("agg",))
            else:
                cols.append(operand(t))
        agg = rule.aggregate
        terms = tuple(operand(t) for t in agg.over) if agg else ()
        return cls(rule.head.relation, tuple(cols), agg.function if agg else None, terms)


@dataclass
class PlanDAG:
    subplans: dict[int, IRNode] = field(default_factory=dict)
    rule_roots: dict[tuple[int, int], int] = field(default_factory=dict)
    heads: dict[int, HeadBinding] = field(default_factory=dict)
    shared_count: int = 0
    encodings: dict[int, bytes] = field(default_factory=dict)

    def expand(self, subplan: int) -> IRNode:
        node = self.subplans[subplan]
        return node.with_children(rename(self.expand(c.ref), c.schema) for c in node.children)

    def rule_ir(self, rule_id: int, variant: int = 0) -> IRNode:
        return self.expand(self.rule_roots[(rule_id, variant)])

    def consumers(self) -> dict[int, int]:
        """How many times each subplan is referenced (by nodes or rule roots)."""
        uses = {i: 0 for i in self.subplans}
        for node in self.subplans.values():
            for c in node.children:
                uses[c.ref] += 1
        for root in self.rule_roots.values():
            uses[root] += 1
        return uses

    def render(self) -> str:
        lines = []
        for sid, node in self.subplans.items():
            kids = ", ".join(f"#{c.ref}" for c in node.children)
            lines.append(f"#{sid} {node.label()} -> {node.schema}" + (f" <- [{kids}]" if kids else ""))
        for (rid, variant), sid in self.rule_roots.items():
            lines.append(f"r{rid}/v{variant} -> #{sid}")
        lines.append(f"shared={self.shared_count}")
        return "\n".join(lines)


def share_subplans(
    irs: dict[tuple[int, int], IRNode],
    heads: dict[int, HeadBinding] | None = None,
    enabled: bool = True,
) -> PlanDAG:
    """Register every subtree once; later equal subtrees become references.

    A single bottom-up pass already reaches the fixpoint: a subtree is
    visited only after all of its children were deduplicated, so no
    sharing opportunity can appear later. ``shared_count`` counts the
    maximal truncated subtrees.
    """
    dag = PlanDAG(heads=dict(heads or {}))
    registry: dict[bytes, int] = {}
    memo: dict[int, tuple] = {}

    def resolve(sid: int) -> tuple:
        if sid not in memo:
            memo[sid] = _encode(dag.subplans[sid], resolve)
        return memo[sid]

    def visit(node: IRNode) -> tuple[IRNode, int, bool]:
        if node.kind == REF:
            return node, 0, False
        kids = [visit(c) for c in node.children]
        normal = node.with_children(k[0] for k in kids)
        enc = canonicalize(normal, resolve)
        if enabled and enc in registry:
            return shared_ref(registry[enc], node.schema), 0, True
        sid = len(dag.subplans)
        dag.subplans[sid] = normal
        dag.encodings[sid] = enc
        if enabled:
            registry[enc] = sid
        below = sum(n + (1 if shared else 0) for _, n, shared in kids)
        return shared_ref(sid, node.schema), below, False

    for key in sorted(irs):
        ref, below, shared = visit(irs[key])
        dag.rule_roots[key] = ref.ref
        dag.shared_count += below + (1 if shared else 0)
    return dag


def reshare(dag: PlanDAG, enabled: bool = True) -> PlanDAG:
    """Share an already shared DAG again (used to check idempotence)."""
    irs = {k: dag.expand(sid) for k, sid in dag.rule_roots.items()}
    return share_subplans(irs, dag.heads, enabled)


__all__ = ["HeadBinding", "PlanDAG", "canonicalize", "render", "reshare", "share_subplans"]
