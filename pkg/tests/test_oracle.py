import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowlog.errors import NegativeWeight
from flowlog.frontend import parse_program
from flowlog.oracle import (
    RandomGraphSpec,
    cc_min_labels,
    dijkstra,
    generate_graph,
    is_bipartite,
    naive_evaluate,
    reach_even,
    reference_algorithm,
    transitive_closure,
)
from flowlog.programs import CORPUS, REACH_EVEN, TC


def test_naive_examples():
    p = parse_program(REACH_EVEN)
    assert naive_evaluate(p, {"edge": [(1, 2), (2, 3), (3, 1)], "target": [(3,)]}) == {"reach": {(1,), (2,), (3,)}}
    assert naive_evaluate(parse_program(TC), {"edge": [(1, 2), (2, 3), (3, 4)]})["tc"] == {
        (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),
    }  # fmt: skip
    assert naive_evaluate(parse_program(TC), {"edge": []}) == {"tc": set()}


def test_reference_examples():
    edges = [(1, 2), (2, 3), (7, 9)]
    assert cc_min_labels(edges + [(b, a) for a, b in edges]) == {1: 1, 2: 1, 3: 1, 7: 7, 9: 7}
    assert dijkstra([(4, 8, 5)], 4) == {4: 0, 8: 5}
    assert not is_bipartite([(1, 2), (2, 3), (3, 1)])
    assert is_bipartite([(1, 2), (2, 3), (3, 4), (4, 1)])
    assert transitive_closure([(1, 2), (2, 3)]) == {(1, 2), (1, 3), (2, 3)}
    assert reach_even([(1, 2), (2, 3), (3, 1)], [3]) == {1, 2, 3}


def test_reference_dispatch_and_errors():
    assert reference_algorithm("SSSP", [(1, 2, 3)], source=1) == {1: 0, 2: 3}
    assert reference_algorithm("TC", [(1, 1)]) == {(1, 1)}
    with pytest.raises(NegativeWeight):
        dijkstra([(1, 2, -1)], 1)
    with pytest.raises(ValueError):
        reference_algorithm("PAGERANK", [])


def test_generator_examples():
    assert generate_graph(RandomGraphSpec(nodes=0, prob=0.5)) == []
    full = generate_graph(RandomGraphSpec(nodes=5, prob=1.0))
    assert len(full) == 20 and all(u != v for u, v in full)
    spec = RandomGraphSpec(nodes=100, prob=0.05, seed=7)
    assert generate_graph(spec) == generate_graph(spec)
    assert generate_graph(spec) != generate_graph(RandomGraphSpec(nodes=100, prob=0.05, seed=8))


def test_generator_options():
    g = generate_graph(RandomGraphSpec(nodes=6, edges=10, seed=1, symmetric=True, weighted=True, max_weight=3))
    weights = {(u, v): w for u, v, w in g}
    assert all(weights[(v, u)] == w for (u, v), w in weights.items())
    assert all(1 <= w <= 3 for w in weights.values())
    loops = generate_graph(RandomGraphSpec(nodes=3, prob=1.0, self_loops=True))
    assert len(loops) == 9
    assert len(generate_graph(RandomGraphSpec(nodes=4, edges=100))) == 12
    with pytest.raises(ValueError):
        RandomGraphSpec(nodes=3)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.integers(0, 10_000), st.randoms(use_true_random=False))
def test_naive_ignores_rule_and_atom_order(name, seed, rnd):
    from corpus import instance

    p = parse_program(CORPUS[name])
    inputs = instance(name, seed, max_nodes=15)
    rules = list(p.rules)
    rnd.shuffle(rules)
    shuffled = []
    for r in rules:
        body = list(r.body)
        rnd.shuffle(body)
        shuffled.append(replace(r, body=tuple(body)))
    q = p.with_rules(shuffled)
    assert naive_evaluate(q, inputs) == naive_evaluate(p, inputs)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_references_agree_with_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    edges = [(rng.randint(1, n), rng.randint(1, n)) for _ in range(rng.randint(0, 12))]
    # closure by repeated squaring
    closure = set(edges)
    while True:
        more = closure | {(a, d) for a, b in closure for c, d in closure if b == c}
        if more == closure:
            break
        closure = more
    assert transitive_closure(edges) == closure
    sym = edges + [(b, a) for a, b in edges]
    labels = cc_min_labels(sym)
    for a, b in sym:
        assert labels[a] == labels[b] <= min(a, b)
