"""Seeded random graphs."""

from __future__ import annotations

import random
from dataclasses import dataclass


@dataclass(frozen=True)
class RandomGraphSpec:
    """G(n, p) when ``prob`` is set, otherwise G(n, m) with ``edges`` arcs.

    Nodes are numbered ``1..nodes``. ``symmetric`` adds the reverse of every
    arc; ``weighted`` attaches integer weights in ``[1, max_weight]``.
    """

    nodes: int
    prob: float | None = None
    edges: int | None = None
    seed: int = 0
    weighted: bool = False
    max_weight: int = 10
    self_loops: bool = False
    symmetric: bool = False

    def __post_init__(self):
        if self.nodes < 0:
            raise ValueError("nodes must be non-negative")
        if (self.prob is None) == (self.edges is None):
            raise ValueError("give exactly one of prob and edges")
        if self.prob is not None and not 0.0 <= self.prob <= 1.0:
            raise ValueError("prob must lie in [0, 1]")


def generate_graph(spec: RandomGraphSpec) -> list[tuple[int, ...]]:
    """Sorted arcs ``(u, v)`` or ``(u, v, w)``; identical specs give identical graphs."""
    rng = random.Random(spec.seed)
    n = spec.nodes
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if spec.self_loops or u != v]
    if spec.prob is not None:
        chosen = [p for p in pairs if rng.random() < spec.prob]
    else:
        chosen = rng.sample(pairs, min(spec.edges, len(pairs)))
    arcs = set(chosen)
    if spec.symmetric:
        arcs |= {(v, u) for u, v in arcs}
    ordered = sorted(arcs)
    if not spec.weighted:
        return ordered
    weights: dict[tuple[int, int], int] = {}
    for u, v in ordered:
        key = (min(u, v), max(u, v)) if spec.symmetric else (u, v)
        if key not in weights:
            weights[key] = rng.randint(1, spec.max_weight)
    return [(u, v, weights[(min(u, v), max(u, v)) if spec.symmetric else (u, v)]) for u, v in ordered]
