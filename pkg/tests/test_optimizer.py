import pytest
from helpers import (
    instances,
    is_acyclic,
    join_order_costs,
    max_spanning_weight,
    random_rules,
    rule_source,
)
from hypothesis import given, settings
from hypothesis import strategies as st

from flowlog.errors import NotApplicable
from flowlog.frontend import build_catalog, build_rule_catalog, parse_program, stratify_program
from flowlog.optimizer import (
    apply_sip,
    build_join_graph,
    build_plan,
    default_visit_order,
    enumerate_rooted_jsts,
    listing_order_plan,
    plan_cost,
    select_plan,
    sip_rewrite,
    tree_weight,
)
from flowlog.oracle import naive_evaluate
from flowlog.programs import GALEN, REACH_EVEN

R3 = """
.decl p(a:number, b:number)
.decl c(a:number, b:number, c:number)
p(x, z) :- c(y, w, z), p(x, w), p(x, y).
"""


def entry_of(src: str, rule_id: int):
    p = parse_program(src)
    return build_catalog(p, stratify_program(p))[rule_id]


def by_root(entry):
    return {t.roots: t for t in enumerate_rooted_jsts(build_join_graph(entry))}


def test_example_join_graph():
    g = build_join_graph(entry_of(REACH_EVEN, 2))
    assert g.node_ids == (0, 1, 2)
    assert g.edges == ((0, 1, 1), (1, 2, 1))


def test_triangle_join_graph():
    g = build_join_graph(entry_of(R3, 1))
    assert g.edges == ((0, 1, 1), (0, 2, 1), (1, 2, 1))


def test_single_atom_graph_and_trees():
    e = entry_of(".decl e(x:number, y:number)\n.decl f(x:number)\nf(x) :- e(x, y).", 1)
    g = build_join_graph(e)
    assert g.node_ids == (0,) and g.edges == ()
    trees = enumerate_rooted_jsts(g)
    assert len(trees) == 1 and trees[0].roots == (0,) and trees[0].parent == {}
    choice = select_plan(e)
    assert choice.cost.total == 2


def test_jst_counts():
    assert len(enumerate_rooted_jsts(build_join_graph(entry_of(REACH_EVEN, 2)))) == 3
    assert len(enumerate_rooted_jsts(build_join_graph(entry_of(R3, 1)))) == 9


def test_enumeration_is_deterministic_and_distinct():
    g = build_join_graph(entry_of(R3, 1))
    a, b = enumerate_rooted_jsts(g), enumerate_rooted_jsts(g)
    assert [t.encoding() for t in a] == [t.encoding() for t in b]
    assert len({t.encoding() for t in a}) == len(a)
    keys = [(t.tree_edges, t.roots) for t in a]
    assert keys == sorted(keys)


def test_example_plan_costs():
    e = entry_of(REACH_EVEN, 2)
    trees = by_root(e)
    assert plan_cost(trees[(2,)], e).total == 3
    assert plan_cost(trees[(0,)], e).total == 2
    choice = select_plan(e)
    assert choice.cost.total == 2 and choice.fallback is None


def test_cost_is_max_of_steps():
    e = entry_of(REACH_EVEN, 2)
    for t in enumerate_rooted_jsts(build_join_graph(e)):
        c = plan_cost(t, e)
        assert c.total == max(n for _, n in c.per_step)


def test_galen_r2_avoids_u_q_first():
    program = parse_program(GALEN)
    e = build_catalog(program, stratify_program(program))[4]
    rule = e.rule
    names = {rule.body[i].relation: i for i in e.nodes}
    oracle = join_order_costs({n: e.atom_vars[i] for n, i in names.items()}, set(rule.head_vars()))
    assert min(oracle.values()) == 4
    assert {plan: c for plan, c in oracle.items() if ("q", "u") in plan} == {("p", ("q", "u")): 5}

    choice = select_plan(e)
    assert choice.cost.total == min(oracle.values())
    first = next(s for s in build_plan(choice.tree, e).walk() if s.kind == "join")
    joined = {e.rule.body[s.atom].relation for s in first.walk() if s.kind == "scan"}
    assert joined != {"u", "q"}
    # every JST whose first join is u with q costs 5
    for tree, cost in choice.candidates:
        step = next(s for s in build_plan(tree, e).walk() if s.kind == "join")
        if {e.rule.body[s.atom].relation for s in step.walk() if s.kind == "scan"} == {"u", "q"}:
            assert cost == 5


def test_search_space_cap_falls_back_to_listing():
    e = entry_of(R3, 1)
    choice = select_plan(e, cap=2)
    assert choice.fallback == "search space exceeded"
    assert choice.tree == listing_order_plan(e)


def test_listing_plan_is_left_deep_chain():
    t = listing_order_plan(entry_of(REACH_EVEN, 2))
    assert t.roots == (2,) and t.parent == {0: 1, 1: 2}
    assert t.post_order == (0, 1, 2)


def test_disconnected_graph_gives_forest():
    e = entry_of(".decl a(x:number)\n.decl b(y:number, z:number)\n.decl h(x:number, y:number)\nh(x, y) :- a(x), b(y, z).", 1)
    trees = enumerate_rooted_jsts(build_join_graph(e))
    assert [t.roots for t in trees] == [(0, 1)] or [t.roots for t in trees] == [(1, 0)]
    assert all(t.parent == {} for t in trees)
    assert select_plan(e).cost.total == 2


def test_sip_two_atom_rule():
    src = ".decl r(a:number,b:number)\n.decl s(a:number,b:number)\n.decl h(a:number,b:number)\nh(x,z) :- r(x,y), s(y,z)."
    rw = sip_rewrite(parse_program(src).rules[0], [0, 1])
    assert [str(r) for r in rw.aux_rules] == [
        "__sip_1_1_1(y, z) :- r(_, y), s(y, z).",
        "__sip_1_0_2(x, y) :- r(x, y), __sip_1_1_1(y, _).",
    ]
    assert str(rw.reduced_rule) == "h(x, z) :- __sip_1_0_2(x, y), __sip_1_1_1(y, z)."


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_sip_two_atom_equivalence(data):
    src = ".decl r(a:number,b:number)\n.decl s(a:number,b:number)\n.decl h(a:number,b:number)\n.input r\n.input s\n.output h\nh(x,z) :- r(x,y), s(y,z)."
    program = parse_program(src)
    inputs = data.draw(instances([["x", "y"], ["y", "z"]]))
    inputs = {"r": inputs["r0"], "s": inputs["r1"]}
    rewritten, _ = apply_sip(program, stratify_program(program), "on")
    expected = {(x, z) for x, y in inputs["r"] for y2, z in inputs["s"] if y == y2}
    assert naive_evaluate(program, inputs)["h"] == expected
    assert naive_evaluate(rewritten, inputs)["h"] == expected


def test_sip_not_applicable():
    with pytest.raises(NotApplicable):
        sip_rewrite(parse_program(".decl e(x:number)\n.decl f(x:number)\nf(x) :- e(x).").rules[0])


def test_sip_pass_order_and_final_names():
    rw = sip_rewrite(parse_program(R3).rules[0], [0, 1, 2])
    passes = [r.head.relation.rsplit("_", 1)[1] for r in rw.aux_rules]
    assert passes == sorted(passes)
    final = {r.head.relation.split("_")[4]: r.head.relation for r in rw.aux_rules}
    assert sorted(a.relation for a in rw.reduced_rule.body) == sorted(final.values())


def test_default_visit_order_starts_at_widest_atom():
    assert default_visit_order(entry_of(R3, 1)) == [0, 1, 2]
    assert default_visit_order(entry_of(REACH_EVEN, 2)) == [0, 1, 2]


def test_apply_sip_auto_only_touches_recursive_multiway_rules():
    program = parse_program(GALEN)
    strat = stratify_program(program)
    _, rewrites = apply_sip(program, strat, "auto")
    assert set(rewrites) == {4, 5, 8}
    _, none = apply_sip(program, strat, "off")
    assert none == {}


# properties


@settings(max_examples=150, deadline=None)
@given(random_rules(max_atoms=6))
def test_trees_have_maximum_weight(rule):
    atoms, head = rule
    e = build_rule_catalog(parse_program(rule_source(atoms, head)).rules[0])
    g = build_join_graph(e)
    best = max_spanning_weight(g.node_ids, g.edges)
    for t in enumerate_rooted_jsts(g):
        assert tree_weight(g, t) == best
        assert set(t.parent) | set(t.roots) == set(g.node_ids)


@settings(max_examples=150, deadline=None)
@given(random_rules(max_atoms=6))
def test_acyclic_rules_get_join_trees(rule):
    atoms, head = rule
    e = build_rule_catalog(parse_program(rule_source(atoms, head)).rules[0])
    sets = [e.atom_vars[n] for n in e.nodes]
    if not is_acyclic(sets):
        return
    for t in enumerate_rooted_jsts(build_join_graph(e)):
        adjacent = {(c, p) for c, p in t.parent.items()} | {(p, c) for c, p in t.parent.items()}
        for v in set().union(*sets):
            holders = {n for n in e.nodes if v in e.atom_vars[n]}
            start = next(iter(holders))
            seen, stack = {start}, [start]
            while stack:
                n = stack.pop()
                for m in holders:
                    if m not in seen and (n, m) in adjacent:
                        seen.add(m)
                        stack.append(m)
            assert seen == holders


@settings(max_examples=100, deadline=None)
@given(random_rules(max_atoms=5), st.permutations(list("abcdef")))
def test_cost_invariant_under_renaming(rule, perm):
    atoms, head = rule
    mapping = {v: f"v{perm.index(v)}" for v in "abcdef"}
    e1 = build_rule_catalog(parse_program(rule_source(atoms, head)).rules[0])
    renamed = [[mapping[v] for v in a] for a in atoms]
    e2 = build_rule_catalog(parse_program(rule_source(renamed, [mapping[v] for v in head])).rules[0])
    t1 = enumerate_rooted_jsts(build_join_graph(e1))
    t2 = enumerate_rooted_jsts(build_join_graph(e2))
    assert [t.encoding() for t in t1] == [t.encoding() for t in t2]
    assert [plan_cost(t, e1) for t in t1] == [plan_cost(t, e2) for t in t2]


@settings(max_examples=150, deadline=None)
@given(random_rules(max_atoms=6))
def test_selection_never_worse_than_listing(rule):
    atoms, head = rule
    e = build_rule_catalog(parse_program(rule_source(atoms, head)).rules[0])
    listing = plan_cost(listing_order_plan(e), e).total
    choice = select_plan(e)
    assert choice.cost.total <= listing
    if choice.candidates:
        assert choice.cost.total <= min(c for _, c in choice.candidates)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_sip_equivalence_random_rules(data):
    atoms, head = data.draw(random_rules(min_atoms=2, max_atoms=4))
    program = parse_program(rule_source(atoms, head))
    e = build_rule_catalog(program.rules[0])
    if len(e.nodes) < 2:
        return
    inputs = data.draw(instances(atoms))
    order = data.draw(st.permutations(list(e.nodes)))
    rw = sip_rewrite(program.rules[0], order, program=program)
    rewritten = program.with_rules([*rw.aux_rules, rw.reduced_rule], rw.decls)
    want = naive_evaluate(program, inputs)
    assert naive_evaluate(rewritten, inputs) == want


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_sip_recursive_equivalence_and_reduction(data):
    src = """
    .decl p0(a:number, b:number)
    .decl c(a:number, b:number, c:number)
    .decl p(a:number, b:number)
    .input p0
    .input c
    p(x, y) :- p0(x, y).
    p(x, z) :- c(y, w, z), p(x, y), p(x, w).
    """
    program = parse_program(src)
    small = st.integers(1, 5)
    inputs = {
        "p0": data.draw(st.lists(st.tuples(small, small), max_size=10)),
        "c": data.draw(st.lists(st.tuples(small, small, small), max_size=10)),
    }
    rewritten, rewrites = apply_sip(program, stratify_program(program), "on")
    assert 2 in rewrites
    got = naive_evaluate(rewritten, inputs)
    want = naive_evaluate(program, inputs)
    assert got["p"] == want["p"]
    # each reduced relation only ever holds facts of the relation it reduces
    for aux in rewrites[2].aux_rules:
        atom = int(aux.head.relation.split("_")[4])
        original = {**inputs, **want}[program.rules[1].body[atom].relation]
        assert set(got[aux.head.relation]) <= set(map(tuple, original))
