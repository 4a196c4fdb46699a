"""Logic fusion: collapse FlatMap chains and fold them into the Join below."""

from __future__ import annotations

from dataclasses import replace

from ..frontend.ast import Const
from .ir import FLATMAP, JOIN, JOINFLATMAP, Filter, IRNode


def _substitute(node: IRNode, inner: IRNode):
    """Rewrite ``node``'s operands, which name ``inner``'s outputs, in ``inner``'s input space."""
    source = dict(zip(inner.schema.columns, inner.projection))

    def sub(o):
        return o if isinstance(o, Const) else source[o]

    filters = inner.filters + tuple(Filter(sub(f.left), f.op, sub(f.right)) for f in node.filters)
    projection = tuple(sub(o) for o in node.projection)
    return filters, projection


def _identity(node: IRNode) -> tuple:
    return tuple(node.input_columns())


def fuse(ir: IRNode) -> IRNode:
    """Bottom-up fusion; shared references are left alone as boundaries."""
    node = ir.with_children(fuse(c) for c in ir.children) if ir.children else ir
    if node.kind != FLATMAP:
        return node
    child = node.children[0]
    if child.kind in (FLATMAP, JOINFLATMAP):
        filters, projection = _substitute(node, child)
        return replace(child, schema=node.schema, filters=filters, projection=projection)
    if child.kind == JOIN:
        as_jfm = replace(child, kind=JOINFLATMAP, projection=_identity(child))
        filters, projection = _substitute(node, as_jfm)
        return replace(as_jfm, schema=node.schema, filters=filters, projection=projection)
    return node
