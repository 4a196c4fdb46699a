"""Stratum-by-stratum semi-naive evaluation of a plan DAG."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..errors import NonTermination
from ..frontend.ast import LATTICE_AGGREGATES, Program
from ..frontend.depgraph import Stratification
from ..planner.ir import ANTIJOIN, DELTA, FLATMAP, FULL, JOIN, JOINFLATMAP, SCAN
from ..planner.share import HeadBinding, PlanDAG
from .collection import COUNT, LATTICES, PRESENCE, Arrangement, Collection, Monoid
from .operators import (
    antijoin_op,
    compile_row,
    distinct_op,
    flat_map_op,
    join_core,
    lattice_rows,
    reduce_aggregate,
    reduce_lattice,
)
from .stats import EvalStats


@dataclass
class RelationState:
    name: str
    full: Collection
    delta: Collection
    aggregate: str | None = None
    # batches of new facts in insertion order (set semantics only)
    history: list[Collection] = field(default_factory=list)
    version: int = 0

    @property
    def lattice(self) -> bool:
        return self.aggregate in LATTICE_AGGREGATES


@dataclass
class _Incremental:
    stratum: int
    collection: Collection
    upto: int
    arrangement: Arrangement | None = None


class Executor:
    """Runs a PlanDAG to fixpoint.

    ``monoid`` is PRESENCE for the boolean specialization, or COUNT, in
    which case every rule's output is made distinct before it is merged.
    """

    def __init__(
        self,
        program: Program,
        strat: Stratification,
        dag: PlanDAG,
        monoid: Monoid = PRESENCE,
        workers: int = 1,
        max_iterations: int | None = None,
    ):
        if monoid not in (PRESENCE, COUNT):
            raise ValueError("the base monoid must be Presence or Count")
        if workers < 1:
            raise ValueError("workers must be at least 1")
        self.program = program
        self.strat = strat
        self.dag = dag
        self.monoid = monoid
        self.workers = workers
        self.max_iterations = max_iterations
        self.stats = EvalStats()
        self.pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
        self._join_counter = [0]

        self.last_stratum: dict[str, int] = {}
        for idx, scc in enumerate(strat.strata):
            for rid in scc:
                rel = program.rule(rid).head.relation
                self.last_stratum[rel] = max(self.last_stratum.get(rel, -1), idx)
        self.current = -1

        self.fns = {}
        self.scans: dict[int, frozenset[tuple[str, str]]] = {}
        self.linear: dict[int, str] = {}
        for sid, node in dag.subplans.items():
            if node.kind in (FLATMAP, JOINFLATMAP):
                filters, projection = node.positional()
                self.fns[sid] = compile_row(filters, projection)
            if node.kind == SCAN:
                self.scans[sid] = frozenset({(node.relation, node.role)})
                if node.role == FULL:
                    self.linear[sid] = node.relation
            else:
                self.scans[sid] = frozenset().union(*(self.scans[c.ref] for c in node.children))
                if node.kind == FLATMAP and node.children[0].ref in self.linear:
                    self.linear[sid] = self.linear[node.children[0].ref]

        self.variants: dict[int, list[int]] = {}
        for rid, variant in dag.rule_roots:
            self.variants.setdefault(rid, []).append(variant)

        self.static: dict[int, Collection] = {}
        self.static_arr: dict[int, Arrangement] = {}
        self.memo: dict[int, Collection] = {}
        self.memo_arr: dict[int, Arrangement] = {}
        self.incremental: dict[int, _Incremental] = {}
        self.contributions: dict[str, Collection] = {}
        self.relations: dict[str, RelationState] = {}
        self._lattice_view: dict[tuple[str, str], tuple[int, Collection, Collection]] = {}

    # ---- relation store ---------------------------------------------

    def _state(self, name: str) -> RelationState:
        st = self.relations.get(name)
        if st is None:
            agg = self.program.aggregate_of(name)
            m = LATTICES[agg] if agg in LATTICE_AGGREGATES else self.monoid
            st = RelationState(name, Collection(m), Collection(m), agg)
            self.relations[name] = st
        return st

    def load(self, inputs: dict[str, Collection | set | list]) -> None:
        for name, data in inputs.items():
            self._seed(name, data)
        for atom in self.program.facts:
            self._seed(name=atom.relation, data=[tuple(t.value for t in atom.terms)])

    def _seed(self, name: str, data) -> None:
        st = self._state(name)
        rows = data.tuples() if isinstance(data, Collection) else {tuple(t) for t in data}
        if st.lattice:
            seeded = reduce_lattice(Collection.from_tuples(self.monoid, rows), st.full.monoid)
            for g, v in seeded:
                st.full.add(g, v)
        else:
            for t in rows:
                if t not in st.full:
                    st.full.add(t, self.monoid.one)
        st.version += 1

    def _complete(self, relation: str) -> bool:
        return self.last_stratum.get(relation, -1) < self.current

    def _rows(self, relation: str, role: str) -> Collection:
        st = self._state(relation)
        source = st.delta if role == DELTA else st.full
        if not st.lattice:
            return source
        key = (relation, role)
        cached = self._lattice_view.get(key)
        if cached is None or cached[0] != st.version or cached[1] is not source:
            cached = (st.version, source, lattice_rows(source, self.monoid))
            self._lattice_view[key] = cached
        return cached[2]

    # ---- subplans ------------------------------------------------------

    def _is_static(self, sid: int) -> bool:
        return all(role != DELTA and self._complete(rel) for rel, role in self.scans[sid])

    def _is_incremental(self, sid: int) -> bool:
        rel = self.linear.get(sid)
        if rel is None or self.dag.subplans[sid].kind == SCAN:
            return False
        return not self._complete(rel) and not self._state(rel).lattice

    def _apply_chain(self, sid: int, source: Collection) -> Collection:
        node = self.dag.subplans[sid]
        if node.kind == SCAN:
            return source
        return flat_map_op(self._apply_chain(node.children[0].ref, source), self.fns[sid])

    def _incremental_value(self, sid: int) -> _Incremental:
        rel = self.linear[sid]
        st = self._state(rel)
        inc = self.incremental.get(sid)
        if inc is None or inc.stratum != self.current:
            out = self._apply_chain(sid, st.full)
            inc = _Incremental(self.current, out, len(st.history))
            self.incremental[sid] = inc
            self.stats.add_output(sid, len(out))
            return inc
        for batch in st.history[inc.upto :]:
            extra = self._apply_chain(sid, batch)
            for t, d in extra:
                inc.collection.add(t, d)
            if inc.arrangement is not None:
                inc.arrangement.merge(extra)
                self.stats.note_size(sid, len(inc.arrangement))
            self.stats.add_output(sid, len(extra))
        inc.upto = len(st.history)
        return inc

    def value(self, sid: int) -> Collection:
        if sid in self.static:
            return self.static[sid]
        if self._is_incremental(sid):
            return self._incremental_value(sid).collection
        if sid in self.memo:
            return self.memo[sid]
        out = self._compute(sid)
        self.stats.add_output(sid, len(out))
        if self._is_static(sid):
            self.static[sid] = out
        else:
            self.memo[sid] = out
        return out

    def arranged(self, sid: int) -> Arrangement:
        if sid in self.static_arr:
            return self.static_arr[sid]
        key_arity = len(self.dag.subplans[sid].schema.key)
        if self._is_incremental(sid):
            inc = self._incremental_value(sid)
            if inc.arrangement is None:
                inc.arrangement = Arrangement.build(inc.collection, key_arity)
                self.stats.note_build(sid, len(inc.arrangement))
            return inc.arrangement
        if sid in self.memo_arr:
            return self.memo_arr[sid]
        arr = Arrangement.build(self.value(sid), key_arity)
        self.stats.note_build(sid, len(arr))
        if self._is_static(sid):
            self.static_arr[sid] = arr
        else:
            self.memo_arr[sid] = arr
        return arr

    def _compute(self, sid: int) -> Collection:
        node = self.dag.subplans[sid]
        kids = [c.ref for c in node.children]
        if node.kind == SCAN:
            return self._rows(node.relation, node.role)
        if node.kind == FLATMAP:
            return flat_map_op(self.value(kids[0]), self.fns[sid])
        if node.kind in (JOIN, JOINFLATMAP):
            before = self._join_counter[0]
            out = join_core(
                self.arranged(kids[0]),
                self.arranged(kids[1]),
                self.fns.get(sid),
                self.workers,
                self.pool,
                self._join_counter,
            )
            self.stats.join_output += self._join_counter[0] - before
            return out
        if node.kind == ANTIJOIN:
            return antijoin_op(self.value(kids[0]), self.arranged(kids[1]))
        raise ValueError(f"cannot execute {node.kind}")

    # ---- rules ---------------------------------------------------------

    def fire(self, rule_id: int, variant: int) -> Collection:
        """Head facts (or aggregate contributions) derived by one rule variant."""
        root = self.value(self.dag.rule_roots[(rule_id, variant)])
        head: HeadBinding = self.dag.heads[rule_id]
        out = Collection(self.monoid)
        if head.aggregate in ("COUNT", "SUM"):
            for t, _ in root:
                group = tuple(t[c[1]] if c[0] == "col" else c[1] for c in head.columns if c[0] != "agg")
                over = tuple(t[o[1]] if o[0] == "col" else o[1] for o in head.aggregate_terms)
                out.add(group + (over,), self.monoid.one)
        else:
            for t, _ in root:
                row = []
                for c in head.columns:
                    if c[0] == "col":
                        row.append(t[c[1]])
                    elif c[0] == "const":
                        row.append(c[1])
                    else:
                        row.append(sum(t[o[1]] if o[0] == "col" else o[1] for o in head.aggregate_terms))
                out.add(tuple(row), self.monoid.one)
        if self.monoid is COUNT:
            out = distinct_op(out)
        self.stats.rule_derived[rule_id] = self.stats.rule_derived.get(rule_id, 0) + len(out)
        return out

    def _absorb(self, candidates: dict[str, list[Collection]]) -> bool:
        """Merge derived facts; returns whether any relation changed."""
        changed = False
        for rel, parts in candidates.items():
            st = self._state(rel)
            if st.aggregate in ("COUNT", "SUM"):
                store = self.contributions.setdefault(rel, Collection(self.monoid))
                for part in parts:
                    for t, _ in part:
                        store.add(t, self.monoid.one)
                values = reduce_aggregate(
                    store, lambda t: t[:-1], lambda t: sum(t[-1]), st.aggregate, self.monoid
                )
                st.full = values
                st.delta = Collection(self.monoid)
                st.version += 1
                changed = changed or bool(values)
            elif st.lattice:
                best = Collection(st.full.monoid)
                for part in parts:
                    for t, _ in part:
                        best.add(t[:-1], t[-1])
                delta = Collection(st.full.monoid)
                for g, v in best:
                    old = st.full.rows.get(g)
                    if old is None or st.full.monoid.combine(old, v) != old:
                        st.full.rows[g] = v
                        delta.rows[g] = v
                st.delta = delta
                if delta:
                    st.version += 1
                    changed = True
            else:
                new = Collection(self.monoid)
                for part in parts:
                    for t, _ in part:
                        if t not in st.full and t not in new:
                            new.add(t, self.monoid.one)
                for t, d in new:
                    st.full.add(t, d)
                st.delta = new
                if new:
                    st.history.append(new)
                    st.version += 1
                    changed = True
        return changed

    def _new_round(self) -> None:
        self.memo.clear()
        self.memo_arr.clear()

    def evaluate_stratum(self, index: int) -> int:
        """Evaluate one stratum; returns the number of iterations."""
        self.current = index
        rules = sorted(self.strat.strata[index])
        heads = {self.program.rule(r).head.relation for r in rules}
        for rel in heads:
            self._state(rel).delta = Collection(self._state(rel).full.monoid)
        self._new_round()
        candidates: dict[str, list[Collection]] = {rel: [] for rel in heads}
        for rid in rules:
            candidates[self.program.rule(rid).head.relation].append(self.fire(rid, 0))
        self._absorb(candidates)
        iterations = 1
        recursive = any(self.strat.is_recursive(r) for r in rules)
        while recursive and any(self._state(rel).delta for rel in heads):
            if self.max_iterations is not None and iterations >= self.max_iterations:
                raise NonTermination(f"stratum {index} did not converge within {self.max_iterations} iterations")
            self._new_round()
            candidates = {rel: [] for rel in heads}
            for rid in rules:
                rel = self.program.rule(rid).head.relation
                for variant in self.variants.get(rid, [0]):
                    if variant:
                        candidates[rel].append(self.fire(rid, variant))
            self._absorb(candidates)
            iterations += 1
        self._new_round()
        self.stats.iterations[index] = iterations
        return iterations

    def evaluate_program(self) -> dict[str, set[tuple]]:
        try:
            for index in range(len(self.strat.strata)):
                self.evaluate_stratum(index)
        finally:
            if self.pool is not None:
                self.pool.shutdown()
        return {rel: self.relation_rows(rel) for rel in self.program.output_relations()}

    def relation_rows(self, relation: str) -> set[tuple]:
        st = self._state(relation)
        if st.lattice:
            return {g + (v,) for g, v in st.full}
        return st.full.tuples()


def evaluate_program(
    program: Program,
    strat: Stratification,
    dag: PlanDAG,
    inputs: dict[str, set | list | Collection],
    monoid: Monoid = PRESENCE,
    workers: int = 1,
    max_iterations: int | None = None,
) -> tuple[dict[str, set[tuple]], EvalStats]:
    ex = Executor(program, strat, dag, monoid, workers, max_iterations)
    ex.load(inputs)
    return ex.evaluate_program(), ex.stats
