"""Plain-text plan report for ``--explain``."""

from __future__ import annotations

from .optimizer.joingraph import build_join_graph
from .pipeline import Compiled


def explain(compiled: Compiled) -> str:
    out: list[str] = []
    prog = compiled.program
    out.append("== strata")
    for idx, scc in enumerate(compiled.strat.strata):
        flag = " recursive" if any(compiled.strat.is_recursive(r) for r in scc) else ""
        out.append(f"stratum {idx}: {', '.join(f'r{r}' for r in sorted(scc))}{flag}")
    if compiled.rewrites:
        out.append("== sip")
        for rid, rw in sorted(compiled.rewrites.items()):
            out.append(f"r{rid} visit order: {list(rw.visit_order)}")
            for aux in rw.aux_rules:
                out.append(f"  r{aux.id}. {aux}")
            out.append(f"  r{rid}'. {rw.reduced_rule}")
    for rule in prog.rules:
        entry = compiled.catalog[rule.id]
        choice = compiled.choices[rule.id]
        out.append(f"== rule r{rule.id}: {rule}")
        g = build_join_graph(entry)
        nodes = ", ".join(f"{i}:{rule.body[i]}" for i in g.node_ids)
        out.append(f"join graph nodes: {nodes}")
        out.append("join graph edges: " + (", ".join(f"{u}-{v}(w={w})" for u, v, w in g.edges) or "none"))
        if entry.semijoins:
            out.append("semijoins: " + ", ".join(f"{a}->{h}" for a, h in sorted(entry.semijoins.items())))
        for tree, cost in choice.candidates:
            parent = dict(sorted(tree.parent.items()))
            out.append(f"candidate roots={list(tree.roots)} parent={parent} cost={cost}")
        tree = choice.tree
        out.append(
            f"chosen roots={list(tree.roots)} parent={dict(sorted(tree.parent.items()))} "
            f"post_order={list(tree.post_order)} cost={choice.cost.total}"
            + (f" ({choice.fallback})" if choice.fallback else "")
        )
    out.append("== plan dag")
    out.append(compiled.dag.render())
    return "\n".join(out) + "\n"
