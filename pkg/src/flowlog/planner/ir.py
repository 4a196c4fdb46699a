"""Per-rule relational IR.

Nodes carry named schemas for readability, but every operator is also
compiled to positional form: filters and projections refer to input
column indices. The positional form is what the executor runs and what
the canonical encoding hashes, so two subplans that differ only in
variable names encode identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Union

from ..frontend.ast import Const

SCAN = "Scan"
FLATMAP = "FlatMap"
JOIN = "Join"
JOINFLATMAP = "JoinFlatMap"
ANTIJOIN = "Antijoin"
REF = "SharedRef"

EDB, FULL, DELTA = "edb", "full", "delta"

Operand = Union[str, Const]


@dataclass(frozen=True)
class Schema:
    key: tuple[str, ...] = ()
    value: tuple[str, ...] = ()

    @property
    def columns(self) -> tuple[str, ...]:
        return self.key + self.value

    def __str__(self) -> str:
        return f"({', '.join(self.key)} | {', '.join(self.value)})"


@dataclass(frozen=True)
class Filter:
    left: Operand
    op: str
    right: Operand

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True, eq=False)
class IRNode:
    kind: str
    schema: Schema
    children: tuple["IRNode", ...] = ()
    relation: str | None = None
    role: str | None = None
    arity: int = 0
    keys: tuple[str, ...] = ()
    filters: tuple[Filter, ...] = ()
    projection: tuple[Operand, ...] = ()
    ref: int | None = None
    # body atom a scan reads; bookkeeping only, not part of the encoding
    atom: int | None = field(default=None, compare=False)

    def with_children(self, children) -> "IRNode":
        return replace(self, children=tuple(children))

    def walk(self) -> Iterator["IRNode"]:
        for c in self.children:
            yield from c.walk()
        yield self

    def input_columns(self) -> tuple[str, ...]:
        if self.kind in (FLATMAP,):
            return self.children[0].schema.columns
        if self.kind in (JOIN, JOINFLATMAP):
            left, right = self.children
            return self.keys + left.schema.value + right.schema.value
        if self.kind == ANTIJOIN:
            return self.children[0].schema.columns
        return ()

    def positional(self) -> tuple[tuple, tuple]:
        """(filters, projection) with column names replaced by indices."""
        index = {c: i for i, c in enumerate(self.input_columns())}

        def pos(o: Operand):
            return ("k", o.value) if isinstance(o, Const) else ("c", index[o])

        filters = tuple((pos(f.left), f.op, pos(f.right)) for f in self.filters)
        projection = tuple(pos(o) for o in self.projection)
        return filters, projection

    def label(self) -> str:
        if self.kind == SCAN:
            return f"Scan {self.relation} [{self.role}]"
        if self.kind == REF:
            return f"SharedRef -> #{self.ref}"
        parts = [self.kind]
        if self.keys or self.kind in (JOIN, JOINFLATMAP, ANTIJOIN):
            parts.append(f"on ({', '.join(self.keys)})")
        if self.filters:
            parts.append("where " + " and ".join(str(f) for f in self.filters))
        return " ".join(parts)


def scan(relation: str, arity: int, role: str, atom: int | None = None) -> IRNode:
    cols = tuple(f"${i}" for i in range(arity))
    return IRNode(SCAN, Schema((), cols), relation=relation, role=role, arity=arity, atom=atom)


def flat_map(child: IRNode, key: tuple[str, ...], value: tuple[str, ...], filters=(), projection=None) -> IRNode:
    schema = Schema(tuple(key), tuple(value))
    proj = tuple(projection) if projection is not None else schema.columns
    return IRNode(FLATMAP, schema, (child,), filters=tuple(filters), projection=proj)


def join(left: IRNode, right: IRNode, keys: tuple[str, ...]) -> IRNode:
    assert left.schema.key == keys and right.schema.key == keys, "join inputs must be keyed on the join keys"
    return IRNode(JOIN, Schema(keys, left.schema.value + right.schema.value), (left, right), keys=keys)


def antijoin(left: IRNode, right: IRNode, keys: tuple[str, ...]) -> IRNode:
    assert left.schema.key == keys and right.schema.key == keys
    return IRNode(ANTIJOIN, left.schema, (left, right), keys=keys)


def shared_ref(subplan: int, schema: Schema) -> IRNode:
    return IRNode(REF, schema, ref=subplan)


def render(node: IRNode, indent: int = 0) -> str:
    pad = "  " * indent
    lines = [f"{pad}{node.label()} -> {node.schema}"]
    for c in node.children:
        lines.append(render(c, indent + 1))
    return "\n".join(lines)


def rename(node: IRNode, schema: Schema) -> IRNode:
    """The same computation with its output columns renamed positionally."""
    if node.schema == schema:
        return node
    assert len(schema.key) == len(node.schema.key) and len(schema.value) == len(node.schema.value)
    if node.kind in (SCAN, FLATMAP, JOINFLATMAP, REF):
        return replace(node, schema=schema)
    k = len(schema.key)
    if node.kind == JOIN:
        left, right = node.children
        nl = len(left.schema.value)
        lv, rv = schema.value[:nl], schema.value[nl:]
        kids = (rename(left, Schema(schema.key, lv)), rename(right, Schema(schema.key, rv)))
    else:  # antijoin
        left, right = node.children
        kids = (rename(left, schema), rename(right, Schema(schema.key, ())))
    assert k == len(node.keys)
    return replace(node, schema=schema, keys=schema.key, children=kids)
