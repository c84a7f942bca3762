"""Ground-truth optimiser: exhaustive enumeration at desk scale.

Enumerates, per graph, every representable source-to-sink path, every
resource choice along it and every integer edge delay inside the waiting
windows, then scores all cross-graph combinations with evaluate_objective.
No pruning anywhere: this module trades speed for being obviously correct.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import (
    Edge,
    Infeasible,
    Instance,
    PathwayGraph,
    Solution,
    audit_solution,
    enumerate_chordless_paths,
    require_valid,
)
from .scoring import evaluate_objective


class BudgetExceeded(RuntimeError):
    def __init__(self, space: int, budget: int):
        super().__init__(f"assignment space {space} exceeds budget {budget}")
        self.space = space
        self.budget = budget


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: Solution
    explored: int


def _admissible_paths(instance: Instance, graph: PathwayGraph) -> list[tuple[str, ...]]:
    pins_true = instance.pinned_true & set(graph.nodes)
    pins_false = instance.pinned_false & set(graph.nodes)
    paths = []
    for path in enumerate_chordless_paths(graph):
        on_path = set(path)
        if pins_true <= on_path and not (pins_false & on_path):
            paths.append(path)
    return paths


def _count_graph_assignments(instance: Instance, graph: PathwayGraph,
                             paths: list[tuple[str, ...]]) -> int:
    specs = instance.node_map()
    total = 0
    for path in paths:
        count = 1
        for node in path:
            count *= len(specs[node].options)
        for a, b in zip(path, path[1:]):
            edge = _edge_between(graph, a, b)
            count *= edge.t_max - edge.t_min + 1
        total += count
    return total


def _edge_between(graph: PathwayGraph, src: str, dst: str) -> Edge:
    for e in graph.edges:
        if e.src == src and e.dst == dst:
            return e
    raise KeyError((src, dst))


def _graph_assignments(instance: Instance, graph: PathwayGraph,
                       paths: list[tuple[str, ...]]):
    """Yield (executed, clock, choice) triples in deterministic order:
    path, then choices, then delays."""
    specs = instance.node_map()
    for path in paths:
        edges = [_edge_between(graph, a, b) for a, b in zip(path, path[1:])]
        option_lists = [specs[node].options for node in path]
        delay_ranges = [range(e.t_min, e.t_max + 1) for e in edges]
        for choices in itertools.product(*option_lists):
            choice = dict(zip(path, choices))
            for delays in itertools.product(*delay_ranges):
                clock = {path[0]: graph.start_time}
                t = graph.start_time
                for node, delay in zip(path[1:], delays):
                    t += delay
                    clock[node] = t
                yield path, clock, choice


def oracle_solve(instance: Instance, budget: int = 10_000_000) -> OracleResult:
    """Exact optimum by full enumeration; deterministic first-found witness."""
    require_valid(instance)

    per_graph_paths = [_admissible_paths(instance, g) for g in instance.graphs]
    for graph, paths in zip(instance.graphs, per_graph_paths):
        if graph.nodes and not paths:
            raise Infeasible(f"graph {graph.id}: no admissible path under pins")

    space = 1
    for graph, paths in zip(instance.graphs, per_graph_paths):
        space *= _count_graph_assignments(instance, graph, paths)
    if space > budget:
        raise BudgetExceeded(space, budget)

    streams = [list(_graph_assignments(instance, g, paths))
               for g, paths in zip(instance.graphs, per_graph_paths)]

    best_value: int | None = None
    best_assignment = None
    explored = 0
    for combo in itertools.product(*streams):
        executed = frozenset(n for path, _, _ in combo for n in path)
        clock: dict[str, int] = {}
        choice: dict[str, str] = {}
        for _, clk, cho in combo:
            clock.update(clk)
            choice.update(cho)
        breakdown = evaluate_objective(instance, executed, clock, choice)
        explored += 1
        if best_value is None or breakdown.objective > best_value:
            best_value = breakdown.objective
            best_assignment = (executed, dict(clock), dict(choice), breakdown)

    if best_assignment is None:
        # Only possible when the instance has no graphs at all.
        empty = evaluate_objective(instance, frozenset(), {}, {})
        witness = Solution(frozenset(), {}, {}, empty.objective,
                           empty.effectiveness_total, empty.interaction_total,
                           empty.conflicts)
        return OracleResult(0, witness, explored)

    executed, clock, choice, breakdown = best_assignment
    witness = Solution(
        executed=executed, clock=clock, choice=choice,
        objective=breakdown.objective,
        effectiveness_total=breakdown.effectiveness_total,
        interaction_total=breakdown.interaction_total,
        conflicts=breakdown.conflicts,
    )
    issues = audit_solution(instance, witness)
    assert not issues, f"oracle witness violates the output contract: {issues}"
    return OracleResult(breakdown.objective, witness, explored)


def oracle_agrees(instance: Instance, solution: Solution,
                  budget: int = 10_000_000) -> bool:
    """True iff the solution's objective matches the enumerated optimum."""
    return oracle_solve(instance, budget).optimum == solution.objective
