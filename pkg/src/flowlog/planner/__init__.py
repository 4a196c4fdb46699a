from .fuse import fuse
from .ir import (
    ANTIJOIN,
    DELTA,
    EDB,
    FLATMAP,
    FULL,
    JOIN,
    JOINFLATMAP,
    REF,
    SCAN,
    Filter,
    IRNode,
    Schema,
    render,
)
from .share import HeadBinding, PlanDAG, canonicalize, reshare, share_subplans
from .translate import base_roles, delta_variants, translate_jst_to_ir, variable_order, with_delta

__all__ = [
    "ANTIJOIN",
    "DELTA",
    "EDB",
    "FLATMAP",
    "FULL",
    "Filter",
    "HeadBinding",
    "IRNode",
    "JOIN",
    "JOINFLATMAP",
    "PlanDAG",
    "REF",
    "SCAN",
    "Schema",
    "base_roles",
    "canonicalize",
    "delta_variants",
    "fuse",
    "render",
    "reshare",
    "share_subplans",
    "translate_jst_to_ir",
    "variable_order",
    "with_delta",
]
