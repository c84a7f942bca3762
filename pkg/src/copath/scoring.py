"""Score model: threshold combiner, severity mapping, objective evaluation.

The global objective is the sum of per-executed-node effectiveness scores
plus, for every pair of executed nodes living in two distinct graphs, the
combined interaction score of the two picked resources.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ConflictRecord,
    Instance,
    SeverityMap,
    ThresholdCombiner,
)


class UnknownSeverity(ValueError):
    """Severity token outside minor/moderate/major."""


class UnassignedNode(ValueError):
    """An executed node is missing a clock or a valid resource choice."""


@dataclass(frozen=True)
class ObjectiveBreakdown:
    objective: int
    effectiveness_total: int
    interaction_total: int
    conflicts: tuple[ConflictRecord, ...]


def eval_f(combiner: ThresholdCombiner, interaction: int, distance: int,
           amount_a: int, amount_b: int) -> int:
    """Pass the interaction through, or zero it.

    Zeroed as soon as the time distance exceeds the window or either amount
    falls below the floor; the boundary values themselves pass through.
    """
    if distance > combiner.time_window:
        return 0
    if amount_a < combiner.amount_floor or amount_b < combiner.amount_floor:
        return 0
    return interaction


def severity_to_interaction(severity_map: SeverityMap, severity: str) -> int:
    if severity == "minor":
        return severity_map.minor
    if severity == "moderate":
        return severity_map.moderate
    if severity == "major":
        return severity_map.major
    raise UnknownSeverity(severity)


def evaluate_objective(instance: Instance, executed, clock, choice) -> ObjectiveBreakdown:
    """Score an assignment exactly; conflicts list the nonzero pair terms.

    Interactions are counted once per cross-graph pair (lower graph index
    first); pairs inside one graph never score.
    """
    executed = frozenset(executed)
    specs = instance.node_map()
    resources = instance.resource_map()

    for node in executed:
        spec = specs.get(node)
        if spec is None:
            raise UnassignedNode(f"executed node {node} has no spec")
        if node not in clock:
            raise UnassignedNode(f"no clock for executed node {node}")
        picked = choice.get(node)
        if picked is None:
            raise UnassignedNode(f"no choice for executed node {node}")
        if picked not in spec.options:
            raise UnassignedNode(f"choice {picked} not an option of {node}")

    effectiveness_total = sum(
        resources[choice[node]].effectiveness for node in executed)

    interaction_total = 0
    conflicts: list[ConflictRecord] = []
    per_graph = [sorted(executed & set(g.nodes)) for g in instance.graphs]
    for i1 in range(len(instance.graphs)):
        for i2 in range(i1 + 1, len(instance.graphs)):
            for j in per_graph[i1]:
                r_j = resources[choice[j]]
                for k in per_graph[i2]:
                    r_k = resources[choice[k]]
                    raw = instance.interactions.get(r_j.id, r_k.id)
                    if raw == 0:
                        continue
                    distance = abs(clock[k] - clock[j])
                    value = eval_f(instance.combiner, raw, distance,
                                   r_j.amount, r_k.amount)
                    if value != 0:
                        interaction_total += value
                        conflicts.append(ConflictRecord(
                            node_a=j, node_b=k,
                            resource_a=r_j.id, resource_b=r_k.id,
                            time_distance=distance, contribution=value))

    conflicts.sort(key=lambda c: (c.node_a, c.node_b))
    return ObjectiveBreakdown(
        objective=effectiveness_total + interaction_total,
        effectiveness_total=effectiveness_total,
        interaction_total=interaction_total,
        conflicts=tuple(conflicts),
    )


def objective_bounds(instance: Instance) -> tuple[int, int]:
    """Bracket every feasible objective value.

    Upper: each node contributes its best nonnegative effectiveness option,
    each cross-graph node pair its best nonnegative option interaction.
    Lower: same with worst nonpositive values. Both ignore the combiner, so
    the bracket is conservative but guaranteed.
    """
    specs = instance.node_map()
    resources = instance.resource_map()

    upper = 0
    lower = 0
    for spec in instance.nodes:
        values = [resources[o].effectiveness for o in spec.options if o in resources]
        if values:
            upper += max(0, max(values))
            lower += min(0, min(values))

    for i1 in range(len(instance.graphs)):
        for i2 in range(i1 + 1, len(instance.graphs)):
            for j in instance.graphs[i1].nodes:
                for k in instance.graphs[i2].nodes:
                    spec_j, spec_k = specs.get(j), specs.get(k)
                    if spec_j is None or spec_k is None:
                        continue
                    values = [instance.interactions.get(r1, r2)
                              for r1 in spec_j.options for r2 in spec_k.options]
                    if values:
                        upper += max(0, max(values))
                        lower += min(0, min(values))
    return lower, upper
