"""Shared strategies and brute-force oracles for the test suite."""

from __future__ import annotations

import re
from itertools import combinations

from hypothesis import strategies as st

VARS = "abcdef"


def rule_source(atoms: list[list[str]], head: list[str], outputs: bool = True) -> str:
    """A one-rule program where body atom i reads its own relation r<i>."""
    lines = [f".decl r{i}({', '.join(f'c{k}:number' for k in range(len(a)))})" for i, a in enumerate(atoms)]
    lines.append(f".decl h({', '.join(f'c{k}:number' for k in range(len(head)))})")
    lines += [f".input r{i}" for i in range(len(atoms))]
    if outputs:
        lines.append(".output h")
    body = ", ".join(f"r{i}({', '.join(a)})" for i, a in enumerate(atoms))
    lines.append(f"h({', '.join(head)}) :- {body}.")
    return "\n".join(lines) + "\n"


@st.composite
def random_rules(draw, min_atoms: int = 1, max_atoms: int = 5):
    n = draw(st.integers(min_atoms, max_atoms))
    atoms = [draw(st.lists(st.sampled_from(VARS), min_size=1, max_size=3, unique=True)) for _ in range(n)]
    used = sorted({v for a in atoms for v in a})
    head = draw(st.lists(st.sampled_from(used), min_size=1, max_size=3, unique=True))
    return atoms, head


@st.composite
def instances(draw, atoms: list[list[str]], domain: int = 4, max_rows: int = 12):
    return {
        f"r{i}": draw(st.lists(st.tuples(*[st.integers(1, domain)] * len(a)), max_size=max_rows))
        for i, a in enumerate(atoms)
    }


def max_spanning_weight(nodes, edges) -> int:
    """Brute force over edge subsets: the heaviest acyclic subset of full size."""
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v, _ in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
    size = len(nodes) - len({find(n) for n in nodes})
    best = 0
    for subset in combinations(edges, size):
        par = {n: n for n in nodes}

        def root(x, par=par):
            while par[x] != x:
                x = par[x]
            return x

        ok = True
        for u, v, _ in subset:
            a, b = root(u), root(v)
            if a == b:
                ok = False
                break
            par[a] = b
        if ok:
            best = max(best, sum(w for _, _, w in subset))
    return best


def is_acyclic(var_sets: list[frozenset]) -> bool:
    """GYO reduction of a hypergraph."""
    edges = [set(s) for s in var_sets]
    changed = True
    while changed and len(edges) > 1:
        changed = False
        for e in edges:
            for v in list(e):
                if sum(v in f for f in edges) == 1:
                    e.discard(v)
                    changed = True
        for i, e in enumerate(edges):
            if any(j != i and e <= f for j, f in enumerate(edges)):
                edges.pop(i)
                changed = True
                break
    return len(edges) <= 1


def join_order_costs(atom_vars: dict[str, frozenset], head: set[str]) -> dict[tuple, int]:
    """Cost of every left-deep and bushy binary join order.

    The cost of an order is the most distinct variables touched by any scan
    or join, with variables projected away once neither the head nor any
    atom still to come needs them.
    """
    names = sorted(atom_vars)

    def needed(covered: frozenset) -> set[str]:
        out = set(head)
        for n in names:
            if n not in covered:
                out |= atom_vars[n]
        return out

    def plans(group: frozenset):
        if len(group) == 1:
            (n,) = group
            vs = atom_vars[n]
            yield n, vs & needed(group), len(vs)
            return
        items = sorted(group)
        for k in range(1, len(items)):
            for left in combinations(items, k):
                lset = frozenset(left)
                rset = group - lset
                if min(lset) > min(rset):
                    continue
                for lp, lv, lc in plans(lset):
                    for rp, rv, rc in plans(rset):
                        touched = lv | rv
                        yield (lp, rp), touched & needed(group), max(lc, rc, len(touched))

    return {p: c for p, _, c in plans(frozenset(names))}


def normalize_aux(lines: list[str], pattern: str) -> list[str]:
    """Rename auxiliary relations to A1, A2, ... by order of first definition."""
    names: dict[str, str] = {}
    for line in lines:
        head = re.match(r"\s*(\w+)\(", line).group(1)
        if re.fullmatch(pattern, head):
            names.setdefault(head, f"A{len(names) + 1}")

    def sub(m):
        return names.get(m.group(1), m.group(1)) + "("

    return [re.sub(r"(\w+)\(", sub, re.sub(r"\s+", "", line)) for line in lines]
