"""Weighted join graphs and enumeration of rooted maximum spanning trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from ..errors import SearchSpaceExceeded
from ..frontend.catalog import CatalogEntry

DEFAULT_CAP = 10_000


@dataclass(frozen=True)
class JoinGraph:
    nodes: tuple[tuple[int, frozenset[str]], ...]
    edges: tuple[tuple[int, int, int], ...]  # (u, v, weight) with u < v

    @property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.nodes)

    def vars_of(self, node: int) -> frozenset[str]:
        return dict(self.nodes)[node]

    def neighbors(self, node: int) -> list[int]:
        out = []
        for u, v, _ in self.edges:
            if u == node:
                out.append(v)
            elif v == node:
                out.append(u)
        return sorted(out)

    def weight(self, u: int, v: int) -> int:
        a, b = min(u, v), max(u, v)
        for x, y, w in self.edges:
            if (x, y) == (a, b):
                return w
        return 0

    def components(self) -> list[list[int]]:
        """Connected components, largest first, ties by smallest atom id."""
        uf = _UnionFind(self.node_ids)
        for u, v, _ in self.edges:
            uf.union(u, v)
        groups: dict[int, list[int]] = {}
        for n in self.node_ids:
            groups.setdefault(uf.find(n), []).append(n)
        return sorted((sorted(g) for g in groups.values()), key=lambda g: (-len(g), g[0]))


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def build_join_graph(entry: CatalogEntry) -> JoinGraph:
    nodes = tuple((i, entry.atom_vars[i]) for i in entry.nodes)
    edges = []
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            (u, vu), (v, vv) = nodes[a], nodes[b]
            w = len(vu & vv)
            if w:
                edges.append((min(u, v), max(u, v), w))
    return JoinGraph(nodes, tuple(sorted(edges)))


@dataclass(frozen=True)
class RootedJST:
    """A rooted spanning forest; one root per connected component.

    ``roots`` lists components largest first. Children are visited in
    atom (body) order, which fixes the post-order.
    """

    roots: tuple[int, ...]
    parent: dict[int, int] = field(hash=False)
    tree_edges: tuple[tuple[int, int], ...] = ()

    @property
    def root(self) -> int:
        return self.roots[0]

    @cached_property
    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for c, p in self.parent.items():
            out.setdefault(p, []).append(c)
        return {p: sorted(cs) for p, cs in out.items()}

    def children_of(self, node: int) -> list[int]:
        return self.children.get(node, [])

    def subtree(self, node: int) -> list[int]:
        out = [node]
        for c in self.children_of(node):
            out.extend(self.subtree(c))
        return out

    @cached_property
    def post_order(self) -> tuple[int, ...]:
        order: list[int] = []

        def visit(n: int) -> None:
            for c in self.children_of(n):
                visit(c)
            order.append(n)

        for r in self.roots:
            visit(r)
        return tuple(order)

    @cached_property
    def depth(self) -> int:
        def d(n: int) -> int:
            return 1 + max((d(c) for c in self.children_of(n)), default=-1)

        return max(d(r) for r in self.roots)

    def encoding(self) -> tuple:
        return (self.roots, tuple(sorted(self.parent.items())))

    def __hash__(self) -> int:
        return hash(self.encoding())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootedJST) and self.encoding() == other.encoding()


def _orient(edges: tuple[tuple[int, int], ...], root: int) -> dict[int, int]:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    parent: dict[int, int] = {}
    stack, seen = [root], {root}
    while stack:
        n = stack.pop()
        for m in adj.get(n, ()):
            if m not in seen:
                seen.add(m)
                parent[m] = n
                stack.append(m)
    return parent


def _kruskal(nodes, edges, forced, banned) -> tuple[int, int] | None:
    """Weight and edge count of the best forest containing ``forced``."""
    uf = _UnionFind(nodes)
    total = count = 0
    for e in forced:
        if not uf.union(e[0], e[1]):
            return None
        total += e[2]
        count += 1
    for e in edges:
        if e in banned or e in forced:
            continue
        if uf.union(e[0], e[1]):
            total += e[2]
            count += 1
    return total, count


def maximum_spanning_forests(g: JoinGraph, limit: int | None = None) -> list[tuple[tuple[int, int, int], ...]]:
    """All maximum-weight spanning forests, by include/exclude branching."""
    nodes = g.node_ids
    edges = sorted(g.edges, key=lambda e: (-e[2], e[0], e[1]))
    best = _kruskal(nodes, edges, (), frozenset())
    assert best is not None
    best_weight, size = best
    found: list[tuple[tuple[int, int, int], ...]] = []

    def branch(i: int, forced: tuple, banned: frozenset) -> None:
        bound = _kruskal(nodes, edges, forced, banned)
        if bound is None or bound[0] < best_weight or bound[1] < size:
            return
        if len(forced) == size:
            found.append(tuple(sorted(forced)))
            if limit is not None and len(found) > limit:
                raise SearchSpaceExceeded(f"more than {limit} maximum spanning trees")
            return
        if i == len(edges):
            return
        e = edges[i]
        branch(i + 1, forced + (e,), banned)
        branch(i + 1, forced, banned | {e})

    branch(0, (), frozenset())
    return sorted(set(found), key=lambda f: [(u, v) for u, v, _ in f])


def enumerate_rooted_jsts(g: JoinGraph, cap: int = DEFAULT_CAP) -> list[RootedJST]:
    if not g.nodes:
        raise ValueError("join graph is empty")
    components = g.components()
    comp_of = {n: k for k, comp in enumerate(components) for n in comp}
    out: list[RootedJST] = []
    for forest in maximum_spanning_forests(g, limit=cap):
        tree_edges = tuple((u, v) for u, v, _ in forest)
        per_comp = [[e for e in tree_edges if comp_of[e[0]] == k] for k in range(len(components))]
        for roots in product(*components):
            if len(out) >= cap:
                raise SearchSpaceExceeded(f"more than {cap} rooted join spanning trees")
            parent: dict[int, int] = {}
            for k, r in enumerate(roots):
                parent.update(_orient(tuple(per_comp[k]), r))
            out.append(RootedJST(tuple(roots), parent, tree_edges))
    return out


def tree_weight(g: JoinGraph, t: RootedJST) -> int:
    return sum(g.weight(c, p) for c, p in t.parent.items())
