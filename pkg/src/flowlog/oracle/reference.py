"""Classical graph algorithms used as ground truth for the benchmark programs."""

from __future__ import annotations

import heapq
from collections import deque
from typing import Iterable

from ..errors import NegativeWeight

KINDS = ("TC", "REACH_EVEN", "CC_MIN", "SSSP", "BIPARTITE")


def transitive_closure(edges: Iterable[tuple[int, int]]) -> set[tuple[int, int]]:
    """Warshall over the nodes that appear in ``edges``."""
    edges = list(edges)
    nodes = sorted({u for u, _ in edges} | {v for _, v in edges})
    pos = {n: i for i, n in enumerate(nodes)}
    n = len(nodes)
    reach = [[False] * n for _ in range(n)]
    for u, v in edges:
        reach[pos[u]][pos[v]] = True
    for k in range(n):
        rk = reach[k]
        for i in range(n):
            if reach[i][k]:
                ri = reach[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    return {(nodes[i], nodes[j]) for i in range(n) for j in range(n) if reach[i][j]}


def reach_even(edges: Iterable[tuple[int, int]], targets: Iterable[int]) -> set[int]:
    """Nodes with a walk of even length (zero included) to some target.

    BFS backwards over the squared graph.
    """
    pred: dict[int, set[int]] = {}
    for u, v in edges:
        pred.setdefault(v, set()).add(u)
    seen = set(targets)
    queue = deque(seen)
    while queue:
        z = queue.popleft()
        for y in pred.get(z, ()):
            for x in pred.get(y, ()):
                if x not in seen:
                    seen.add(x)
                    queue.append(x)
    return seen


def cc_min_labels(edges: Iterable[tuple[int, int]]) -> dict[int, int]:
    """Smallest node id in each undirected component, via union-find."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    return {x: find(x) for x in list(parent)}


def dijkstra(edges: Iterable[tuple[int, int, int]], source: int) -> dict[int, int]:
    adj: dict[int, list[tuple[int, int]]] = {}
    for u, v, w in edges:
        if w < 0:
            raise NegativeWeight(f"edge {u}->{v} has negative weight {w}")
        adj.setdefault(u, []).append((v, w))
    dist = {source: 0}
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj.get(u, ()):
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def is_bipartite(edges: Iterable[tuple[int, int]]) -> bool:
    """Two-colouring of the undirected graph; self-loops make it odd."""
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    colour: dict[int, int] = {}
    for start in sorted(adj):
        if start in colour:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    return False
    return True


def reference_algorithm(kind: str, edges, **kw):
    """Dispatch by name; extra arguments are ``targets`` and ``source``."""
    kind = kind.upper()
    if kind == "TC":
        return transitive_closure(edges)
    if kind == "REACH_EVEN":
        return reach_even(edges, kw["targets"])
    if kind == "CC_MIN":
        return cc_min_labels(edges)
    if kind == "SSSP":
        return dijkstra(edges, kw["source"])
    if kind == "BIPARTITE":
        return is_bipartite(edges)
    raise ValueError(f"unknown reference algorithm {kind!r}; expected one of {', '.join(KINDS)}")
