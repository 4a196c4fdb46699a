"""The end-to-end pipeline: parse, stratify, rewrite, plan, share, evaluate."""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine.collection import COUNT, PRESENCE, Collection
from .engine.executor import Executor
from .engine.stats import EvalStats
from .frontend.ast import Program
from .frontend.catalog import CatalogEntry, build_catalog
from .frontend.depgraph import Stratification, stratify_program
from .frontend.parser import parse_program
from .optimizer.cost import PlanChoice, build_plan, listing_order_plan, plan_cost, select_plan
from .optimizer.joingraph import DEFAULT_CAP
from .optimizer.sip import SipRewrite, apply_sip
from .planner.fuse import fuse
from .planner.ir import IRNode
from .planner.share import HeadBinding, PlanDAG, share_subplans
from .planner.translate import base_roles, delta_variants, translate_jst_to_ir

TOGGLES = ("plan_opt", "sip", "fusion", "sharing", "boolean_spec")


@dataclass
class RunConfig:
    program_path: str | None = None
    facts_dir: str | None = None
    output_dir: str | None = None
    workers: int = 1
    plan_opt: bool = True
    sip: bool = True
    # with sip on: rewrite every rule with two or more join atoms, not just
    # recursive rules with three or more
    sip_all: bool = False
    fusion: bool = True
    sharing: bool = True
    boolean_spec: bool = True
    stats_path: str | None = None
    explain: bool = False
    run: bool = False
    max_iterations: int | None = None
    delimiter: str = "\t"
    has_header: bool = False
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @property
    def sip_mode(self) -> str:
        if not self.sip:
            return "off"
        return "on" if self.sip_all else "auto"

    @classmethod
    def with_toggles(cls, **toggles: bool) -> "RunConfig":
        unknown = set(toggles) - set(TOGGLES)
        if unknown:
            raise ValueError(f"unknown toggles: {sorted(unknown)}")
        return cls(**toggles)


@dataclass
class Compiled:
    source: Program
    program: Program
    strat: Stratification
    catalog: dict[int, CatalogEntry]
    choices: dict[int, PlanChoice]
    rewrites: dict[int, SipRewrite]
    irs: dict[tuple[int, int], IRNode]
    dag: PlanDAG
    config: RunConfig = field(repr=False, default_factory=RunConfig)


def compile_program(program: Program | str, config: RunConfig | None = None) -> Compiled:
    config = config or RunConfig()
    source = parse_program(program) if isinstance(program, str) else program
    strat0 = stratify_program(source)
    rewritten, rewrites = apply_sip(source, strat0, config.sip_mode)
    strat = stratify_program(rewritten) if rewrites else strat0
    catalog = build_catalog(rewritten, strat)
    edbs = rewritten.edbs
    choices: dict[int, PlanChoice] = {}
    irs: dict[tuple[int, int], IRNode] = {}
    for rule in rewritten.rules:
        entry = catalog[rule.id]
        if config.plan_opt:
            choice = select_plan(entry, config.cap)
        else:
            tree = listing_order_plan(entry)
            choice = PlanChoice(tree, plan_cost(tree, entry), (), fallback="plan optimization off")
        choices[rule.id] = choice
        ir = translate_jst_to_ir(build_plan(choice.tree, entry), entry, base_roles(entry, edbs))
        if config.fusion:
            ir = fuse(ir)
        for variant, vir in delta_variants(ir, entry).items():
            irs[(rule.id, variant)] = vir
    heads = {r.id: HeadBinding.of(r) for r in rewritten.rules}
    dag = share_subplans(irs, heads, enabled=config.sharing)
    return Compiled(source, rewritten, strat, catalog, choices, rewrites, irs, dag, config)


@dataclass
class RunResult:
    outputs: dict[str, set[tuple]]
    stats: EvalStats
    compiled: Compiled


def run_program(
    program: Program | str | Compiled,
    inputs: dict[str, set | list | Collection],
    config: RunConfig | None = None,
) -> RunResult:
    if isinstance(program, Compiled):
        compiled = program
        config = config or compiled.config
    else:
        config = config or RunConfig()
        compiled = compile_program(program, config)
    monoid = PRESENCE if config.boolean_spec else COUNT
    ex = Executor(compiled.program, compiled.strat, compiled.dag, monoid, config.workers, config.max_iterations)
    ex.load(inputs)
    ex.evaluate_program()
    outputs = {rel: ex.relation_rows(rel) for rel in compiled.source.output_relations()}
    return RunResult(outputs, ex.stats, compiled)
