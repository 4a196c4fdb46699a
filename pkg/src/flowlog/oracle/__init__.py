from .generate import RandomGraphSpec, generate_graph
from .naive import naive_evaluate
from .reference import (
    KINDS,
    cc_min_labels,
    dijkstra,
    is_bipartite,
    reach_even,
    reference_algorithm,
    transitive_closure,
)

__all__ = [
    "KINDS",
    "RandomGraphSpec",
    "cc_min_labels",
    "dijkstra",
    "generate_graph",
    "is_bipartite",
    "naive_evaluate",
    "reach_even",
    "reference_algorithm",
    "transitive_closure",
]
