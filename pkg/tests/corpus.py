"""Seeded inputs for the benchmark programs, plus reference answers."""

from __future__ import annotations

import random

from flowlog.oracle import RandomGraphSpec, generate_graph, reference_algorithm
from flowlog.programs import CORPUS

SYMMETRIC = {"cc", "bipartite"}
# programs whose output grows quadratically get smaller graphs
SIZE_LIMIT = {"bipartite": 40, "sg": 80, "tc": 120, "galen": 0}


def graph_size(name: str, seed: int, max_nodes: int = 200) -> int:
    limit = min(max_nodes, SIZE_LIMIT.get(name, max_nodes))
    return 2 + (seed * 37) % max(1, limit - 1)


def instance(name: str, seed: int, max_nodes: int = 200) -> dict[str, list[tuple]]:
    rng = random.Random(seed * 1000 + len(name))
    if name == "galen":
        d = 4 + seed % 6
        k = 6 + seed % 10
        return {
            "p0": [(rng.randint(1, d), rng.randint(1, d)) for _ in range(k)],
            "q0": [(rng.randint(1, d), rng.randint(1, 3), rng.randint(1, d)) for _ in range(k)],
            "u": [(rng.randint(1, d), rng.randint(1, 3), rng.randint(1, d)) for _ in range(k)],
            "c": [(rng.randint(1, d), rng.randint(1, d), rng.randint(1, d)) for _ in range(k)],
            "s": [(rng.randint(1, 3), rng.randint(1, 3)) for _ in range(3)],
            "r": [(rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)) for _ in range(4)],
        }
    n = graph_size(name, seed, max_nodes)
    spec = RandomGraphSpec(
        nodes=n,
        edges=int(n * (1.2 + (seed % 4) * 0.3)),
        seed=seed,
        weighted=name == "sssp",
        symmetric=name in SYMMETRIC,
    )
    g = generate_graph(spec)
    if name == "sssp":
        return {"wedge": g, "source": [(1,)]}
    if name == "reach_even":
        return {"edge": g, "target": [(rng.randint(1, n),)]}
    return {"edge": g}


def reference(name: str, inputs: dict[str, list[tuple]]) -> dict[str, set[tuple]] | None:
    """The expected outputs from a classical algorithm, when one applies."""
    if name == "tc":
        return {"tc": reference_algorithm("TC", inputs["edge"])}
    if name == "reach_even":
        targets = [t[0] for t in inputs["target"]]
        return {"reach": {(x,) for x in reference_algorithm("REACH_EVEN", inputs["edge"], targets=targets)}}
    if name == "cc":
        return {"cc": set(reference_algorithm("CC_MIN", inputs["edge"]).items())}
    if name == "sssp":
        dist = reference_algorithm("SSSP", inputs["wedge"], source=inputs["source"][0][0])
        return {"dist": set(dist.items())}
    if name == "bipartite":
        odd = not reference_algorithm("BIPARTITE", inputs["edge"])
        return {"answer": {()} if odd else set()}
    if name == "two_hops_count":
        counts: dict[tuple, int] = {}
        edges = inputs["edge"]
        for x, y in edges:
            for y2, z in edges:
                if y == y2:
                    counts[(x, z)] = counts.get((x, z), 0) + 1
        return {"two_hops": {k + (v,) for k, v in counts.items()}}
    if name == "negation":
        edges = set(inputs["edge"])
        return {"open_two_hops": {(x, z) for x, y in edges for y2, z in edges if y == y2 and (x, z) not in edges}}
    return None


NAMES = sorted(CORPUS)
