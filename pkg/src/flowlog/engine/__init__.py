from .collection import COUNT, LATTICES, MAX_LATTICE, MIN_LATTICE, PRESENCE, Arrangement, Collection, Monoid
from .executor import Executor, RelationState, evaluate_program
from .operators import (
    antijoin_op,
    arrange,
    compile_row,
    concat_op,
    distinct_op,
    flat_map_op,
    join_core,
    lift_diff,
    reduce_aggregate,
    reduce_lattice,
)
from .stats import EvalStats

__all__ = [
    "Arrangement",
    "COUNT",
    "Collection",
    "EvalStats",
    "Executor",
    "LATTICES",
    "MAX_LATTICE",
    "MIN_LATTICE",
    "Monoid",
    "PRESENCE",
    "RelationState",
    "antijoin_op",
    "arrange",
    "compile_row",
    "concat_op",
    "distinct_op",
    "evaluate_program",
    "flat_map_op",
    "join_core",
    "lift_diff",
    "reduce_aggregate",
    "reduce_lattice",
]
