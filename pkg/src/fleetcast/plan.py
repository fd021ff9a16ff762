"""Dissemination plans: activation sets, feasibility checking, and cost.

A plan activates, per piece of information, a set of real graph edges
(connectivity or caching). Everything else — hub/transmit/delivery flags and
per-vertex cost — is derived from the activations on demand, so recomputing
is idempotent.

Feasibility rules, each reported under a stable constraint tag:

C2    a vertex received an information it neither forwards nor may deliver
C3    a non-source vertex forwards without exactly one incoming activation,
      or a non-destination vertex has more than one incoming activation
C4    a destination-group vertex has more than one incoming activation
C5    a destination group is never served, or holds competing dead-end
      deliveries
C6    an information's sources never send although transfer is required
C7    a vertex transmits more than one distinct information
C9    a time unit exceeds the channel budget
EDGE  an edge carries more than one information (caching edges are exempt
      when the scenario allows unlimited caching)
FLOW  an activated edge cannot be supplied from the information's sources

Hub flags (one incoming activation per forwarding vertex) and transmit flags
are definitional here: they are derived rather than free variables, so the
remaining formulation constraints cannot be violated independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PlanStructureError
from .graph import CACHING, CONNECTIVITY, VIRTUAL, AugmentedGraph
from .jsonio import read_json, write_json
from .scenario import CACHE_SINGLE

PLAN_FORMAT = "fleetcast-plan/1"


@dataclass(frozen=True)
class Plan:
    """Per-information activation sets over real edge indices."""

    activations: dict

    def __post_init__(self):
        object.__setattr__(self, "activations", {
            int(info_id): frozenset(int(e) for e in edges)
            for info_id, edges in self.activations.items()})

    def lex_key(self):
        """Total order on plans used for reproducible tie-breaking."""
        return tuple(sorted(
            (info_id, e) for info_id, edges in self.activations.items()
            for e in edges))

    @staticmethod
    def empty(info_ids=()):
        return Plan({info_id: frozenset() for info_id in info_ids})


@dataclass(frozen=True)
class Violation:
    constraint: str
    info: int | None
    subject: str
    message: str


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    violations: tuple

    def constraint_ids(self):
        return {v.constraint for v in self.violations}


def _validate_structure(graph: AugmentedGraph, plan: Plan):
    known = {info.id for info in graph.infos}
    for info_id, edges in plan.activations.items():
        if info_id not in known:
            raise PlanStructureError(f"plan references unknown info {info_id}")
        for e in edges:
            if not 0 <= e < len(graph.edges):
                raise PlanStructureError(
                    f"plan references edge index {e} outside the graph")
            if graph.edges[e].kind == VIRTUAL:
                raise PlanStructureError(
                    f"plan activates virtual edge {e}; plans cover real edges only")


def check_feasibility(graph: AugmentedGraph, plan: Plan) -> FeasibilityReport:
    """Evaluate every feasibility rule; structural problems raise instead."""
    _validate_structure(graph, plan)
    infos = {info.id: info for info in graph.infos}
    violations: list[Violation] = []

    def violate(constraint, info, subject, message):
        violations.append(Violation(constraint, info, subject, message))

    # one info per edge
    edge_users: dict[int, list[int]] = {}
    for info_id in sorted(plan.activations):
        for e in sorted(plan.activations[info_id]):
            edge_users.setdefault(e, []).append(info_id)
    for e in sorted(edge_users):
        owners = edge_users[e]
        if len(owners) < 2:
            continue
        edge = graph.edges[e]
        if edge.kind == CACHING and graph.cache_capacity != CACHE_SINGLE:
            continue
        violate("EDGE", None, f"edge {e}",
                f"edge {graph.vertex_label(edge.tail)}->"
                f"{graph.vertex_label(edge.head)} carries infos {owners}")

    # one transmitted info per vertex
    vertex_infos: dict[int, set[int]] = {}
    for info_id, edges in plan.activations.items():
        for e in edges:
            edge = graph.edges[e]
            if edge.kind == CONNECTIVITY:
                vertex_infos.setdefault(edge.tail, set()).add(info_id)
    for v in sorted(vertex_infos):
        owners = vertex_infos[v]
        if len(owners) > 1:
            violate("C7", None, graph.vertex_label(v),
                    f"vertex {graph.vertex_label(v)} transmits "
                    f"{len(owners)} infos: {sorted(owners)}")

    # channel budget per time unit
    layer_active = [0] * graph.horizon
    for edges in plan.activations.values():
        for e in edges:
            edge = graph.edges[e]
            if edge.kind == CONNECTIVITY:
                layer_active[edge.time] += 1
    for t, active in enumerate(layer_active):
        if active > graph.channels:
            violate("C9", None, f"t={t}",
                    f"{active} connectivity edges active at time {t}, "
                    f"budget is {graph.channels}")

    for info_id in sorted(plan.activations):
        info = infos[info_id]
        edges = plan.activations[info_id]
        source_vertices = {graph.vertex_id(u, t) for u, t in info.sources}
        in_cnt: dict[int, int] = {}
        out_cnt: dict[int, int] = {}
        for e in edges:
            edge = graph.edges[e]
            in_cnt[edge.head] = in_cnt.get(edge.head, 0) + 1
            out_cnt[edge.tail] = out_cnt.get(edge.tail, 0) + 1

        def is_dest_copy(v):
            return graph.vertex_uav_time(v)[0] in info.destinations

        for v in sorted(set(in_cnt) | set(out_cnt)):
            ins = in_cnt.get(v, 0)
            outs = out_cnt.get(v, 0)
            label = graph.vertex_label(v)
            if ins > 1:
                violate("C4" if is_dest_copy(v) else "C3", info_id, label,
                        f"vertex {label} has {ins} incoming activations for "
                        f"info {info_id}")
            if outs >= 1 and v not in source_vertices and ins != 1:
                violate("C3", info_id, label,
                        f"vertex {label} forwards info {info_id} with "
                        f"{ins} incoming activations instead of 1")
            if ins == 1 and outs == 0 and not is_dest_copy(v):
                violate("C2", info_id, label,
                        f"vertex {label} receives info {info_id} but neither "
                        f"forwards nor delivers it")

        # supply propagation from the info's source copies
        supplied = set(source_vertices)
        frontier = True
        while frontier:
            frontier = False
            for e in edges:
                edge = graph.edges[e]
                if edge.tail in supplied and edge.head not in supplied:
                    supplied.add(edge.head)
                    frontier = True
        for e in sorted(edges):
            edge = graph.edges[e]
            if edge.tail not in supplied:
                violate("FLOW", info_id, f"edge {e}",
                        f"activated edge {graph.vertex_label(edge.tail)}->"
                        f"{graph.vertex_label(edge.head)} is never supplied "
                        f"with info {info_id}")

        for u in sorted(info.destinations):
            copies = [graph.vertex_id(u, t) for t in range(graph.horizon)]
            if not any(v in supplied for v in copies):
                violate("C5", info_id, f"UAV {u}",
                        f"destination UAV {u} never receives info {info_id}")
            dead_ends = [v for v in copies
                         if in_cnt.get(v, 0) == 1 and out_cnt.get(v, 0) == 0]
            if len(dead_ends) > 1:
                violate("C5", info_id, f"UAV {u}",
                        f"destination UAV {u} has {len(dead_ends)} competing "
                        f"final deliveries of info {info_id}")

        sends = any(out_cnt.get(v, 0) >= 1 for v in source_vertices)
        self_satisfied = all(
            any((u, t) in info.sources for t in range(graph.horizon))
            for u in info.destinations)
        if not sends and not self_satisfied:
            violate("C6", info_id, f"info {info_id}",
                    f"no source copy of info {info_id} sends it")

    violations.sort(key=lambda v: (v.constraint, -1 if v.info is None else v.info,
                                   v.subject))
    return FeasibilityReport(feasible=not violations, violations=tuple(violations))


def plan_cost(graph: AugmentedGraph, plan: Plan) -> float:
    """Total energy: each vertex pays its maximum active outgoing weight.

    Defined for partial and even infeasible plans; caching and virtual edges
    contribute nothing. Summation uses math.fsum so equal plans cost the same
    to the last bit regardless of edge enumeration order.
    """
    _validate_structure(graph, plan)
    vertex_max: dict[int, float] = {}
    for edges in plan.activations.values():
        for e in edges:
            edge = graph.edges[e]
            if edge.kind == CONNECTIVITY:
                prev = vertex_max.get(edge.tail, 0.0)
                vertex_max[edge.tail] = max(prev, edge.weight)
    return math.fsum(vertex_max[v] for v in sorted(vertex_max))


def plan_to_dict(graph: AugmentedGraph, plan: Plan) -> dict:
    _validate_structure(graph, plan)
    activations = {}
    for info_id in sorted(plan.activations):
        rows = []
        for e in sorted(plan.activations[info_id]):
            edge = graph.edges[e]
            tu, tt = graph.vertex_uav_time(edge.tail)
            hu, ht = graph.vertex_uav_time(edge.head)
            rows.append([tu, tt, hu, ht, edge.kind])
        activations[str(info_id)] = rows
    return {"format": PLAN_FORMAT, "activations": activations}


def plan_from_dict(graph: AugmentedGraph, doc: dict) -> Plan:
    activations = {}
    for info_key, rows in doc["activations"].items():
        edges = set()
        for tu, tt, hu, ht, kind in rows:
            tail = graph.vertex_id(tu, tt)
            head = graph.vertex_id(hu, ht)
            e = graph.edge_index_by_pair.get((tail, head))
            if e is None or graph.edges[e].kind != kind:
                raise PlanStructureError(
                    f"plan edge ({tu},{tt})->({hu},{ht}) [{kind}] does not "
                    f"exist in the graph")
            edges.add(e)
        activations[int(info_key)] = edges
    return Plan(activations)


def save_plan(graph: AugmentedGraph, plan: Plan, path) -> None:
    write_json(path, plan_to_dict(graph, plan))


def load_plan(graph: AugmentedGraph, path) -> Plan:
    return plan_from_dict(graph, read_json(path, PLAN_FORMAT))
