"""Re-solving under operator modifications.

A delta pins nodes in or out, bans resources, forces choices, or shifts
per-graph start times (the device for "the existing conditions started x
time units ago, the new one starts now"). Applying a delta derives a new
instance; the original is never touched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Instance, NodeSpec, PathwayGraph, Solution
from .solver import BackendConfig, solve_maximize


class UnknownEntity(ValueError):
    pass


class InfeasibleDelta(ValueError):
    """A node would lose all of its options while still able to execute."""


@dataclass(frozen=True)
class WhatIfDelta:
    pins_true: frozenset[str] = frozenset()
    pins_false: frozenset[str] = frozenset()
    exclude_resources: frozenset[str] = frozenset()
    force_choice: dict[str, str] = field(default_factory=dict)
    start_overrides: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "pins_true", frozenset(self.pins_true))
        object.__setattr__(self, "pins_false", frozenset(self.pins_false))
        object.__setattr__(self, "exclude_resources",
                           frozenset(self.exclude_resources))
        if self.pins_true & self.pins_false:
            raise ValueError("a node cannot be pinned both true and false")

    @property
    def empty(self) -> bool:
        return not (self.pins_true or self.pins_false or self.exclude_resources
                    or self.force_choice or self.start_overrides)


def delta_to_dict(delta: WhatIfDelta) -> dict:
    return {
        "pins_true": sorted(delta.pins_true),
        "pins_false": sorted(delta.pins_false),
        "exclude_resources": sorted(delta.exclude_resources),
        "force_choice": dict(sorted(delta.force_choice.items())),
        "start_overrides": dict(sorted(delta.start_overrides.items())),
    }


def delta_from_dict(doc: dict) -> WhatIfDelta:
    return WhatIfDelta(
        pins_true=frozenset(doc.get("pins_true", ())),
        pins_false=frozenset(doc.get("pins_false", ())),
        exclude_resources=frozenset(doc.get("exclude_resources", ())),
        force_choice={str(k): str(v)
                      for k, v in doc.get("force_choice", {}).items()},
        start_overrides={str(k): int(v)
                         for k, v in doc.get("start_overrides", {}).items()},
    )


def _reachable_under_pins(graph: PathwayGraph, pinned_false: frozenset[str]) -> set[str]:
    """Nodes reachable from the source without passing a pinned-false node."""
    sources = [n for n in graph.nodes
               if not any(e.dst == n for e in graph.edges)]
    reachable: set[str] = set()
    stack = [s for s in sources if s not in pinned_false]
    while stack:
        node = stack.pop()
        if node in reachable:
            continue
        reachable.add(node)
        for e in graph.edges:
            if e.src == node and e.dst not in pinned_false and e.dst not in reachable:
                stack.append(e.dst)
    return reachable


def apply_delta(instance: Instance, delta: WhatIfDelta) -> Instance:
    """Derive the modified instance; raises rather than producing a broken one."""
    specs = instance.node_map()
    graph_ids = {g.id for g in instance.graphs}
    resource_ids = {r.id for r in instance.resources}

    for node in sorted(delta.pins_true | delta.pins_false | set(delta.force_choice)):
        if node not in specs:
            raise UnknownEntity(f"unknown node {node}")
    for rid in sorted(delta.exclude_resources):
        if rid not in resource_ids:
            raise UnknownEntity(f"unknown resource {rid}")
    for gid in sorted(delta.start_overrides):
        if gid not in graph_ids:
            raise UnknownEntity(f"unknown graph {gid}")
    for node, rid in sorted(delta.force_choice.items()):
        if rid not in specs[node].options:
            raise InfeasibleDelta(f"forced choice {rid} is not an option of {node}")
        if rid in delta.exclude_resources:
            raise InfeasibleDelta(f"forced choice {rid} for {node} is excluded")

    pinned_true = instance.pinned_true | delta.pins_true
    pinned_false = instance.pinned_false | delta.pins_false
    if pinned_true & pinned_false:
        raise InfeasibleDelta("pins contradict earlier pins")

    unreachable: set[str] = set()
    for g in instance.graphs:
        unreachable |= set(g.nodes) - _reachable_under_pins(g, pinned_false)
    for node in sorted(pinned_true & unreachable):
        raise InfeasibleDelta(f"pinned-true node {node} is unreachable under pins")

    new_specs = []
    for spec in instance.nodes:
        options = spec.options
        if spec.id in delta.force_choice:
            options = (delta.force_choice[spec.id],)
        remaining = tuple(o for o in options if o not in delta.exclude_resources)
        if not remaining:
            if spec.id in pinned_false or spec.id in unreachable:
                # node can never execute; keep its option list inert
                remaining = options
            else:
                raise InfeasibleDelta(
                    f"every option of {spec.id} is excluded and it may still execute")
        new_specs.append(NodeSpec(spec.id, spec.graph, spec.label, remaining))

    new_graphs = tuple(
        PathwayGraph(g.id, nodes=g.nodes, edges=g.edges,
                     start_time=delta.start_overrides.get(g.id, g.start_time))
        for g in instance.graphs)

    return Instance(
        graphs=new_graphs, nodes=tuple(new_specs), resources=instance.resources,
        interactions=instance.interactions, combiner=instance.combiner,
        pinned_true=pinned_true, pinned_false=pinned_false)


@dataclass(frozen=True)
class GraphDiff:
    graph: str
    nodes_added: tuple[str, ...] = ()
    nodes_dropped: tuple[str, ...] = ()
    choice_changes: dict[str, tuple[str | None, str | None]] = field(default_factory=dict)
    clock_changes: dict[str, tuple[int | None, int | None]] = field(default_factory=dict)

    @property
    def path_changed(self) -> bool:
        return bool(self.nodes_added or self.nodes_dropped)


@dataclass(frozen=True)
class Diff:
    objective_before: int | None
    objective_after: int
    graphs: tuple[GraphDiff, ...] = ()

    @property
    def objective_delta(self) -> int | None:
        if self.objective_before is None:
            return None
        return self.objective_after - self.objective_before


def diff_solutions(instance: Instance, baseline: Solution | None,
                   solution: Solution) -> Diff:
    """Per-graph changes relative to a baseline; no baseline means all-new."""
    graph_diffs = []
    for g in instance.graphs:
        nodes = set(g.nodes)
        before = (baseline.executed & nodes) if baseline else set()
        after = solution.executed & nodes
        added = tuple(sorted(after - before))
        dropped = tuple(sorted(before - after))
        choice_changes: dict[str, tuple[str | None, str | None]] = {}
        clock_changes: dict[str, tuple[int | None, int | None]] = {}
        for n in sorted(nodes):
            old_choice = baseline.choice.get(n) if baseline and n in before else None
            new_choice = solution.choice.get(n) if n in after else None
            if old_choice != new_choice:
                choice_changes[n] = (old_choice, new_choice)
            old_clock = baseline.clock.get(n) if baseline and n in before else None
            new_clock = solution.clock.get(n) if n in after else None
            if old_clock != new_clock:
                clock_changes[n] = (old_clock, new_clock)
        graph_diffs.append(GraphDiff(g.id, added, dropped,
                                     choice_changes, clock_changes))
    return Diff(
        objective_before=baseline.objective if baseline else None,
        objective_after=solution.objective,
        graphs=tuple(graph_diffs))


def diff_to_dict(diff: Diff) -> dict:
    return {
        "objective_before": diff.objective_before,
        "objective_after": diff.objective_after,
        "objective_delta": diff.objective_delta,
        "graphs": [
            {"graph": gd.graph,
             "nodes_added": list(gd.nodes_added),
             "nodes_dropped": list(gd.nodes_dropped),
             "path_changed": gd.path_changed,
             "choice_changes": {n: list(v) for n, v in sorted(gd.choice_changes.items())},
             "clock_changes": {n: list(v) for n, v in sorted(gd.clock_changes.items())}}
            for gd in diff.graphs
        ],
    }


def resolve(config: BackendConfig, instance: Instance, delta: WhatIfDelta,
            baseline: Solution | None = None,
            strategy: str | None = None) -> tuple[Solution, Diff]:
    """Apply the delta, solve the derived instance, report the changes."""
    derived = apply_delta(instance, delta)
    solution = solve_maximize(config, derived, strategy)
    return solution, diff_solutions(instance, baseline, solution)
