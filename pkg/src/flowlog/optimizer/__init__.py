from .cost import PlanChoice, PlanCost, PlanStep, build_plan, listing_order_plan, plan_cost, select_plan
from .joingraph import (
    DEFAULT_CAP,
    JoinGraph,
    RootedJST,
    build_join_graph,
    enumerate_rooted_jsts,
    maximum_spanning_forests,
    tree_weight,
)
from .sip import SipRewrite, apply_sip, aux_name, default_visit_order, sip_rewrite

__all__ = [
    "DEFAULT_CAP",
    "JoinGraph",
    "PlanChoice",
    "PlanCost",
    "PlanStep",
    "RootedJST",
    "SipRewrite",
    "apply_sip",
    "aux_name",
    "build_join_graph",
    "build_plan",
    "default_visit_order",
    "enumerate_rooted_jsts",
    "listing_order_plan",
    "maximum_spanning_forests",
    "plan_cost",
    "select_plan",
    "sip_rewrite",
    "tree_weight",
]
