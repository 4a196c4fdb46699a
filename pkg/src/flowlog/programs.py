"""Benchmark programs used by the tests, the acceptance suite and the README."""

REACH_EVEN = """
.decl edge(x:number, y:number)
.decl target(x:number)
.decl reach(x:number)
.input edge
.input target
.output reach
reach(x) :- target(x).
reach(x) :- edge(x, y), edge(y, z), reach(z).
"""

TC = """
.decl edge(x:number, y:number)
.decl tc(x:number, y:number)
.input edge
.output tc
tc(x, y) :- edge(x, y).
tc(x, z) :- tc(x, y), edge(y, z).
"""

SG = """
.decl edge(x:number, y:number)
.decl sg(x:number, y:number)
.input edge
.output sg
sg(x, y) :- edge(p, x), edge(p, y), x != y.
sg(x, y) :- edge(a, x), sg(a, b), edge(b, y).
"""

# expects a symmetric edge relation
CC = """
.decl edge(x:number, y:number)
.decl cc(x:number, l:number)
.input edge
.output cc
cc(x, MIN(x)) :- edge(x, _).
cc(y, MIN(l)) :- cc(x, l), edge(x, y).
"""

SSSP = """
.decl wedge(x:number, y:number, w:number)
.decl source(x:number)
.decl dist(x:number, d:number)
.input wedge
.input source
.output dist
dist(x, MIN(0)) :- source(x).
dist(y, MIN(d + w)) :- dist(x, d), wedge(x, y, w).
"""

# odd(x, y): a walk of odd length from x to y; expects a symmetric edge relation
BIPARTITE = """
.decl edge(x:number, y:number)
.decl odd(x:number, y:number)
.decl even(x:number, y:number)
.decl answer()
.input edge
.output answer
odd(x, y) :- edge(x, y).
even(x, z) :- odd(x, y), edge(y, z).
odd(x, z) :- even(x, y), edge(y, z).
answer() :- odd(x, x).
"""

GALEN = """
.decl p0(a:number, b:number)
.decl q0(a:number, b:number, c:number)
.decl u(a:number, b:number, c:number)
.decl c(a:number, b:number, c:number)
.decl s(a:number, b:number)
.decl r(a:number, b:number, c:number)
.decl p(a:number, b:number)
.decl q(a:number, b:number, c:number)
.input p0
.input q0
.input u
.input c
.input s
.input r
.output p
.output q
p(x, y) :- p0(x, y).
q(x, r, z) :- q0(x, r, z).
p(x, z) :- p(x, y), p(y, z).
p(x, z) :- p(y, w), u(w, r, z), q(x, r, y).
p(x, z) :- c(y, w, z), p(x, w), p(x, y).
q(x, r, z) :- p(x, y), q(y, r, z).
q(x, q, z) :- q(x, r, z), s(r, q).
q(x, e, o) :- q(x, y, z), r(y, u, e), q(z, u, o).
"""

TWO_HOPS_COUNT = """
.decl edge(x:number, y:number)
.decl two_hops(x:number, z:number, n:number)
.input edge
.output two_hops
two_hops(x, z, COUNT(y)) :- edge(x, y), edge(y, z).
"""

NEGATION = """
.decl edge(x:number, y:number)
.decl open_two_hops(x:number, z:number)
.input edge
.output open_two_hops
open_two_hops(x, z) :- edge(x, y), edge(y, z), !edge(x, z).
"""

CORPUS = {
    "reach_even": REACH_EVEN,
    "tc": TC,
    "sg": SG,
    "cc": CC,
    "sssp": SSSP,
    "bipartite": BIPARTITE,
    "galen": GALEN,
    "two_hops_count": TWO_HOPS_COUNT,
    "negation": NEGATION,
}
