"""Domain model: timed pathway graphs, problem instances, solutions.

A problem instance bundles several single-source DAGs whose edges carry
integer waiting windows, per-node resource options, a symmetric resource
interaction table and a threshold combiner. A solution picks one
source-to-sink path per graph plus a resource and an execution clock for
every executed node.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

NODE_ID_PATTERN = re.compile(r"^[A-Za-z0-9_]+$")


class InvalidGraph(ValueError):
    """An operation needed a valid (acyclic, single-source) graph and got a broken one."""


class InvalidInstance(ValueError):
    """An operation needed a valid instance; carries the validation report."""

    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(str(v) for v in report.violations) or "invalid instance")
        self.report = report


class Infeasible(RuntimeError):
    """No execution satisfies the structural constraints (possible only under pins)."""


@dataclass(frozen=True, order=True)
class Edge:
    """Directed edge with a [t_min, t_max] waiting window (time units)."""

    src: str
    dst: str
    t_min: int
    t_max: int


@dataclass(frozen=True)
class NodeSpec:
    """A task node: where it lives, what to display, which resources can perform it."""

    id: str
    graph: str
    label: str = ""
    options: tuple[str, ...] = ()


@dataclass(frozen=True)
class Resource:
    """A way of performing a task, with an effectiveness score and a consumed amount."""

    id: str
    name: str = ""
    effectiveness: int = 0
    amount: int = 0


@dataclass(frozen=True)
class InteractionTable:
    """Symmetric integer interaction lookup; unlisted pairs score 0.

    Entries are stored under the sorted id pair, so symmetry holds by
    construction.
    """

    entries: dict[tuple[str, str], int] = field(default_factory=dict)

    @staticmethod
    def from_entries(items) -> "InteractionTable":
        """Build from (resource_a, resource_b, value) triples.

        Raises ValueError if the same unordered pair appears with two
        different values. Zero entries are kept (they are explicit).
        """
        table: dict[tuple[str, str], int] = {}
        for a, b, value in items:
            key = (a, b) if a <= b else (b, a)
            if key in table and table[key] != value:
                raise ValueError(f"interaction pair {key} listed twice with different values")
            table[key] = int(value)
        return InteractionTable(table)

    def get(self, a: str, b: str) -> int:
        key = (a, b) if a <= b else (b, a)
        return self.entries.get(key, 0)

    def pairs(self):
        return sorted(self.entries.items())


@dataclass(frozen=True)
class ThresholdCombiner:
    """Parameters of the interaction-score combiner.

    An interaction passes through unchanged iff the time distance between
    the two occurrences is at most ``time_window`` and both amounts are at
    least ``amount_floor``; otherwise it contributes 0.
    """

    time_window: int = 8
    amount_floor: int = 10


@dataclass(frozen=True)
class SeverityMap:
    """Integer values assigned to the minor/moderate/major conflict classes."""

    minor: int = -100
    moderate: int = -1000
    major: int = -5000


@dataclass(frozen=True)
class PathwayGraph:
    """A single-source DAG with an absolute start time for its source node."""

    id: str
    nodes: tuple[str, ...] = ()
    edges: tuple[Edge, ...] = ()
    start_time: int = 0

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(set(self.nodes))))
        object.__setattr__(self, "edges", tuple(sorted(set(self.edges))))

    def out_edges(self, node: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.src == node)

    def in_edges(self, node: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.dst == node)

    def children(self, node: str) -> tuple[str, ...]:
        return tuple(sorted({e.dst for e in self.edges if e.src == node}))

    def parents(self, node: str) -> tuple[str, ...]:
        return tuple(sorted({e.src for e in self.edges if e.dst == node}))


@dataclass(frozen=True)
class Instance:
    """The full problem: graphs, node specs, resources, interactions, combiner.

    ``pinned_true``/``pinned_false`` carry operator pins from what-if deltas;
    they become plain truth assertions in the SMT encoding and execution
    filters in the exhaustive oracle.
    """

    graphs: tuple[PathwayGraph, ...] = ()
    nodes: tuple[NodeSpec, ...] = ()
    resources: tuple[Resource, ...] = ()
    interactions: InteractionTable = field(default_factory=InteractionTable)
    combiner: ThresholdCombiner = field(default_factory=ThresholdCombiner)
    pinned_true: frozenset[str] = frozenset()
    pinned_false: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.id)))
        object.__setattr__(self, "resources", tuple(sorted(self.resources, key=lambda r: r.id)))
        object.__setattr__(self, "pinned_true", frozenset(self.pinned_true))
        object.__setattr__(self, "pinned_false", frozenset(self.pinned_false))

    def node_map(self) -> dict[str, NodeSpec]:
        return {n.id: n for n in self.nodes}

    def resource_map(self) -> dict[str, Resource]:
        return {r.id: r for r in self.resources}

    def graph_map(self) -> dict[str, PathwayGraph]:
        return {g.id: g for g in self.graphs}

    def sorted_resource_ids(self) -> tuple[str, ...]:
        """Stable resource indexing used for SMT label values."""
        return tuple(r.id for r in self.resources)


@dataclass(frozen=True)
class ConflictRecord:
    """One nonzero cross-graph interaction contribution."""

    node_a: str
    node_b: str
    resource_a: str
    resource_b: str
    time_distance: int
    contribution: int


@dataclass(frozen=True)
class Solution:
    """Output triple (executed set, clocks, choices) plus objective decomposition."""

    executed: frozenset[str]
    clock: dict[str, int]
    choice: dict[str, str]
    objective: int
    effectiveness_total: int
    interaction_total: int
    conflicts: tuple[ConflictRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "executed", frozenset(self.executed))
        object.__setattr__(self, "conflicts", tuple(self.conflicts))


@dataclass(frozen=True)
class Violation:
    rule: str
    entity: str
    detail: str = ""

    def __str__(self):
        return f"{self.rule}({self.entity})" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class WalkViolation:
    graph: str
    rule: str
    node: str = ""

    def __str__(self):
        return f"{self.graph}:{self.rule}" + (f"({self.node})" if self.node else "")


@dataclass(frozen=True)
class WalkReport:
    walks: dict[str, tuple[str, ...]] = field(default_factory=dict)
    violations: tuple[WalkViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def graph_sources(graph: PathwayGraph) -> set[str]:
    """Nodes with no incoming edge. An isolated node is a source (and a sink)."""
    targets = {e.dst for e in graph.edges}
    return {n for n in graph.nodes if n not in targets}


def graph_sinks(graph: PathwayGraph) -> set[str]:
    """Nodes with no outgoing edge."""
    origins = {e.src for e in graph.edges}
    return {n for n in graph.nodes if n not in origins}


def _has_cycle(graph: PathwayGraph) -> bool:
    adjacency: dict[str, list[str]] = {n: [] for n in graph.nodes}
    for e in graph.edges:
        adjacency.setdefault(e.src, []).append(e.dst)
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    for start in adjacency:
        if state.get(start):
            continue
        stack = [(start, iter(adjacency.get(start, ())))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for child in it:
                if state.get(child) == 1:
                    return True
                if not state.get(child):
                    state[child] = 1
                    stack.append((child, iter(adjacency.get(child, ()))))
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()
    return False


def _validate_graph(graph: PathwayGraph, out: list[Violation]) -> None:
    node_set = set(graph.nodes)
    seen_pairs: set[tuple[str, str]] = set()
    for e in graph.edges:
        if e.src == e.dst:
            out.append(Violation("edge-self-loop", f"{graph.id}:{e.src}"))
        if e.t_min > e.t_max:
            out.append(Violation("edge-window-inverted", f"{graph.id}:{e.src}->{e.dst}",
                                 f"t_min {e.t_min} > t_max {e.t_max}"))
        if e.t_min < 0 or e.t_max < 0:
            out.append(Violation("edge-window-negative", f"{graph.id}:{e.src}->{e.dst}"))
        for endpoint in (e.src, e.dst):
            if endpoint not in node_set:
                out.append(Violation("edge-endpoint-foreign", f"{graph.id}:{endpoint}"))
        pair = (e.src, e.dst)
        if pair in seen_pairs:
            out.append(Violation("duplicate-edge", f"{graph.id}:{e.src}->{e.dst}"))
        seen_pairs.add(pair)

    if not graph.nodes:
        out.append(Violation("no-source", graph.id, "graph has no nodes"))
        return
    if _has_cycle(graph):
        out.append(Violation("cyclic", graph.id))
        return
    sources = graph_sources(graph)
    if not sources:
        out.append(Violation("no-source", graph.id))
    elif len(sources) > 1:
        out.append(Violation("multiple-sources", graph.id, ",".join(sorted(sources))))


def validate_instance(instance: Instance) -> ValidationReport:
    """Check every structural invariant; violations are data, not exceptions."""
    out: list[Violation] = []

    seen_graph_ids: set[str] = set()
    for g in instance.graphs:
        if g.id in seen_graph_ids:
            out.append(Violation("duplicate-graph-id", g.id))
        seen_graph_ids.add(g.id)
        _validate_graph(g, out)

    # Node sets of distinct graphs must be disjoint.
    owner: dict[str, str] = {}
    for g in instance.graphs:
        for n in g.nodes:
            if n in owner and owner[n] != g.id:
                out.append(Violation("overlapping-node-sets", n, f"{owner[n]} and {g.id}"))
            owner.setdefault(n, g.id)

    resource_ids = set()
    for r in instance.resources:
        if r.id in resource_ids:
            out.append(Violation("duplicate-resource", r.id))
        resource_ids.add(r.id)
        if r.amount < 0:
            out.append(Violation("negative-amount", r.id))

    spec_ids = set()
    for spec in instance.nodes:
        if spec.id in spec_ids:
            out.append(Violation("duplicate-node-spec", spec.id))
        spec_ids.add(spec.id)
        if not NODE_ID_PATTERN.match(spec.id):
            out.append(Violation("node-id-charset", spec.id))
        if spec.graph not in seen_graph_ids:
            out.append(Violation("node-unknown-graph", spec.id, spec.graph))
        elif spec.id not in owner:
            out.append(Violation("node-not-in-graph", spec.id, spec.graph))
        elif owner[spec.id] != spec.graph:
            out.append(Violation("node-graph-mismatch", spec.id,
                                 f"listed in {owner[spec.id]}, declared {spec.graph}"))
        if not spec.options:
            out.append(Violation("options-empty", spec.id))
        seen_opts = set()
        for opt in spec.options:
            if opt not in resource_ids:
                out.append(Violation("unknown-option-resource", spec.id, opt))
            if opt in seen_opts:
                out.append(Violation("duplicate-option", spec.id, opt))
            seen_opts.add(opt)

    # Every graph node needs a NodeSpec; ids must be SMT-safe.
    for g in instance.graphs:
        for n in g.nodes:
            if not NODE_ID_PATTERN.match(n):
                out.append(Violation("node-id-charset", n))
            if n not in spec_ids:
                out.append(Violation("node-unspecified", n, g.id))

    for rid_a, rid_b in instance.interactions.entries:
        for rid in (rid_a, rid_b):
            if rid not in resource_ids:
                out.append(Violation("interaction-unknown-resource", rid))

    if instance.combiner.time_window < 0 or instance.combiner.amount_floor < 0:
        out.append(Violation("combiner-negative", "combiner"))

    all_node_ids = spec_ids | set(owner)
    for pin in sorted(instance.pinned_true | instance.pinned_false):
        if pin not in all_node_ids:
            out.append(Violation("unknown-pinned-node", pin))
    for pin in sorted(instance.pinned_true & instance.pinned_false):
        out.append(Violation("pin-contradiction", pin))

    return ValidationReport(tuple(out))


def require_valid(instance: Instance) -> None:
    report = validate_instance(instance)
    if not report.ok:
        raise InvalidInstance(report)


def _check_graph_shape(graph: PathwayGraph) -> None:
    node_set = set(graph.nodes)
    if not graph.nodes:
        raise InvalidGraph(f"{graph.id}: no nodes")
    for e in graph.edges:
        if e.src not in node_set or e.dst not in node_set:
            raise InvalidGraph(f"{graph.id}: edge endpoint outside node set")
    if _has_cycle(graph):
        raise InvalidGraph(f"{graph.id}: cyclic")
    if len(graph_sources(graph)) != 1:
        raise InvalidGraph(f"{graph.id}: needs exactly one source")


def enumerate_paths(graph: PathwayGraph) -> list[tuple[str, ...]]:
    """All simple source-to-sink paths, children explored in id order."""
    _check_graph_shape(graph)
    (source,) = graph_sources(graph)
    sinks = graph_sinks(graph)
    paths: list[tuple[str, ...]] = []

    def walk(node: str, prefix: tuple[str, ...]):
        if node in sinks:
            paths.append(prefix)
            return
        for child in graph.children(node):
            walk(child, prefix + (child,))

    walk(source, (source,))
    return paths


def enumerate_chordless_paths(graph: PathwayGraph) -> list[tuple[str, ...]]:
    """Source-to-sink paths in which every node's executed successor is unique.

    A path with a forward chord (an edge from w_i to w_j, j >= i+2) cannot be
    expressed by a selection where each selected non-sink has exactly one
    selected child, so these are the executions the encoding can represent.
    """
    children = {n: set(graph.children(n)) for n in graph.nodes}

    def chord_free(path: tuple[str, ...]) -> bool:
        on_path = set(path)
        for i, node in enumerate(path[:-1]):
            if len(children[node] & on_path) != 1:
                return False
        return not (children[path[-1]] & on_path)

    return [p for p in enumerate_paths(graph) if chord_free(p)]


def check_walk(instance: Instance, solution: Solution) -> WalkReport:
    """Reconstruct each graph's executed walk by following unique executed children."""
    walks: dict[str, tuple[str, ...]] = {}
    violations: list[WalkViolation] = []
    executed = solution.executed

    for graph in instance.graphs:
        node_set = set(graph.nodes)
        executed_here = executed & node_set
        if not graph.nodes:
            continue
        sources = graph_sources(graph)
        if len(sources) != 1:
            violations.append(WalkViolation(graph.id, "invalid-graph"))
            continue
        (source,) = sources
        if source not in executed:
            violations.append(WalkViolation(graph.id, "source-not-executed", source))
            continue
        sinks = graph_sinks(graph)
        walk = [source]
        seen = {source}
        current = source
        broken = False
        while True:
            next_nodes = [c for c in graph.children(current) if c in executed]
            if len(next_nodes) > 1:
                violations.append(WalkViolation(graph.id, "two-executed-children", current))
                broken = True
                break
            if not next_nodes:
                if current not in sinks:
                    violations.append(WalkViolation(graph.id, "dead-end", current))
                    broken = True
                break
            (current,) = next_nodes
            if current in seen:
                violations.append(WalkViolation(graph.id, "repeated-node", current))
                broken = True
                break
            seen.add(current)
            walk.append(current)
        if broken:
            continue
        strays = executed_here - seen
        if strays:
            violations.append(WalkViolation(graph.id, "stray-executed", ",".join(sorted(strays))))
            continue
        walks[graph.id] = tuple(walk)

    return WalkReport(walks, tuple(violations))


def audit_solution(instance: Instance, solution: Solution) -> list[str]:
    """Every contract a solution must meet: walk shape, choice membership,
    edge windows between executed endpoints, and source clocks.

    Returns human-readable issue strings; empty means fully conformant.
    """
    issues: list[str] = []
    walk_report = check_walk(instance, solution)
    issues.extend(f"walk: {v}" for v in walk_report.violations)

    specs = instance.node_map()
    for node in sorted(solution.executed):
        spec = specs.get(node)
        if spec is None:
            issues.append(f"executed unknown node {node}")
            continue
        if node not in solution.clock:
            issues.append(f"no clock for executed node {node}")
        picked = solution.choice.get(node)
        if picked is None:
            issues.append(f"no choice for executed node {node}")
        elif picked not in spec.options:
            issues.append(f"choice {picked} not an option of {node}")

    for graph in instance.graphs:
        for e in graph.edges:
            if e.src in solution.executed and e.dst in solution.executed:
                if e.src in solution.clock and e.dst in solution.clock:
                    gap = solution.clock[e.dst] - solution.clock[e.src]
                    if not (e.t_min <= gap <= e.t_max):
                        issues.append(
                            f"edge {e.src}->{e.dst} gap {gap} outside [{e.t_min},{e.t_max}]")
        sources = graph_sources(graph)
        if len(sources) == 1:
            (source,) = sources
            if source in solution.executed and solution.clock.get(source) != graph.start_time:
                issues.append(
                    f"source {source} clock {solution.clock.get(source)} != {graph.start_time}")

    for pin in sorted(instance.pinned_true - solution.executed):
        issues.append(f"pinned-true node {pin} not executed")
    for pin in sorted(instance.pinned_false & solution.executed):
        issues.append(f"pinned-false node {pin} executed")
    return issues
