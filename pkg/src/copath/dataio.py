"""Instance and solution formats: CSV bundle, canonical JSON, DOT export,
plus a seeded synthetic-instance generator.

CSV bundle layout (header rows required, UTF-8):

* ``edges.csv``        graph_id,src,dst,t_min,t_max
* ``nodes.csv``        graph_id,node_id,label,options   (options ``;``-separated)
* ``resources.csv``    resource_id,name,effectiveness,amount
* ``interactions.csv`` resource_a,resource_b,value_or_severity
                       (an integer, or one of minor/moderate/major)
* ``starts.csv``       graph_id,tau
* ``combiner.csv``     time_window,amount_floor        (optional; defaults 8,10)

Graph order is the row order of ``starts.csv``; graphs missing there start
at 0 and follow in first-appearance order.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .model import (
    Edge,
    Instance,
    InteractionTable,
    NodeSpec,
    PathwayGraph,
    Resource,
    SeverityMap,
    Solution,
    ThresholdCombiner,
    ValidationReport,
    validate_instance,
)
from .scoring import severity_to_interaction, UnknownSeverity

REQUIRED_FILES = ("edges.csv", "nodes.csv", "resources.csv",
                  "interactions.csv", "starts.csv")
COMBINER_FILE = "combiner.csv"


class ParseError(ValueError):
    def __init__(self, file: str, line: int, reason: str):
        super().__init__(f"{file}:{line}: {reason}")
        self.file = file
        self.line = line
        self.reason = reason


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("; ".join(str(v) for v in report.violations))
        self.report = report


def _validated(instance: Instance) -> Instance:
    report = validate_instance(instance)
    if not report.ok:
        raise ValidationError(report)
    return instance


# ---------------------------------------------------------------- JSON ----

def instance_to_dict(instance: Instance) -> dict:
    doc = {
        "combiner": {
            "time_window": instance.combiner.time_window,
            "amount_floor": instance.combiner.amount_floor,
        },
        "graphs": [
            {
                "id": g.id,
                "start_time": g.start_time,
                "nodes": list(g.nodes),
                "edges": [
                    {"from": e.src, "to": e.dst, "t_min": e.t_min, "t_max": e.t_max}
                    for e in g.edges
                ],
            }
            for g in instance.graphs
        ],
        "nodes": [
            {"id": n.id, "graph": n.graph, "label": n.label,
             "options": list(n.options)}
            for n in instance.nodes
        ],
        "resources": [
            {"id": r.id, "name": r.name, "effectiveness": r.effectiveness,
             "amount": r.amount}
            for r in instance.resources
        ],
        "interactions": [
            {"a": a, "b": b, "value": value}
            for (a, b), value in instance.interactions.pairs()
        ],
    }
    if instance.pinned_true or instance.pinned_false:
        doc["pins"] = {"true": sorted(instance.pinned_true),
                       "false": sorted(instance.pinned_false)}
    return doc


def instance_from_dict(doc: dict) -> Instance:
    def fail(reason: str):
        raise ParseError("<json>", 0, reason)

    if not isinstance(doc, dict):
        fail("instance document must be an object")
    for key in ("graphs", "nodes", "resources"):
        if key not in doc:
            fail(f"missing {key!r} key")
    try:
        combiner_doc = doc.get("combiner", {})
        combiner = ThresholdCombiner(
            int(combiner_doc.get("time_window", 8)),
            int(combiner_doc.get("amount_floor", 10)))
        graphs = tuple(
            PathwayGraph(
                id=str(g["id"]),
                nodes=tuple(str(n) for n in g.get("nodes", ())),
                edges=tuple(Edge(str(e["from"]), str(e["to"]),
                                 int(e["t_min"]), int(e["t_max"]))
                            for e in g.get("edges", ())),
                start_time=int(g.get("start_time", 0)),
            )
            for g in doc["graphs"]
        )
        nodes = tuple(
            NodeSpec(str(n["id"]), str(n["graph"]), str(n.get("label", "")),
                     tuple(str(o) for o in n.get("options", ())))
            for n in doc["nodes"]
        )
        resources = tuple(
            Resource(str(r["id"]), str(r.get("name", "")),
                     int(r.get("effectiveness", 0)), int(r.get("amount", 0)))
            for r in doc["resources"]
        )
        interactions = InteractionTable.from_entries(
            (str(e["a"]), str(e["b"]), int(e["value"]))
            for e in doc.get("interactions", ()))
        pins = doc.get("pins", {})
        instance = Instance(
            graphs=graphs, nodes=nodes, resources=resources,
            interactions=interactions, combiner=combiner,
            pinned_true=frozenset(str(p) for p in pins.get("true", ())),
            pinned_false=frozenset(str(p) for p in pins.get("false", ())),
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as err:
        raise ParseError("<json>", 0, str(err)) from err
    return _validated(instance)


def save_json(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2, sort_keys=True) + "\n"


def load_json(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError("<json>", err.lineno, err.msg) from err
    return instance_from_dict(doc)


def solution_to_dict(solution: Solution) -> dict:
    return {
        "objective": solution.objective,
        "effectiveness_total": solution.effectiveness_total,
        "interaction_total": solution.interaction_total,
        "executed": sorted(solution.executed),
        "clock": {n: solution.clock[n] for n in sorted(solution.clock)},
        "choice": {n: solution.choice[n] for n in sorted(solution.choice)},
        "conflicts": [
            {"node_a": c.node_a, "node_b": c.node_b,
             "resource_a": c.resource_a, "resource_b": c.resource_b,
             "time_distance": c.time_distance, "contribution": c.contribution}
            for c in solution.conflicts
        ],
    }


def solution_from_dict(doc: dict) -> Solution:
    from .model import ConflictRecord
    try:
        return Solution(
            executed=frozenset(doc["executed"]),
            clock={str(k): int(v) for k, v in doc.get("clock", {}).items()},
            choice={str(k): str(v) for k, v in doc.get("choice", {}).items()},
            objective=int(doc["objective"]),
            effectiveness_total=int(doc.get("effectiveness_total", 0)),
            interaction_total=int(doc.get("interaction_total", 0)),
            conflicts=tuple(
                ConflictRecord(str(c["node_a"]), str(c["node_b"]),
                               str(c["resource_a"]), str(c["resource_b"]),
                               int(c["time_distance"]), int(c["contribution"]))
                for c in doc.get("conflicts", ())),
        )
    except (KeyError, TypeError, ValueError) as err:
        raise ParseError("<json>", 0, str(err)) from err


def solution_records(instance: Instance, solution: Solution | None) -> list[dict]:
    """Per-node panel rows: picked resource, clock, score, conflict partners."""
    resources = instance.resource_map()
    by_node: dict[str, list[dict]] = {}
    if solution is not None:
        for c in solution.conflicts:
            by_node.setdefault(c.node_a, []).append(
                {"partner": c.node_b, "partner_resource": c.resource_b,
                 "time_distance": c.time_distance, "contribution": c.contribution})
            by_node.setdefault(c.node_b, []).append(
                {"partner": c.node_a, "partner_resource": c.resource_a,
                 "time_distance": c.time_distance, "contribution": c.contribution})
    rows = []
    specs = instance.node_map()
    for g in instance.graphs:
        for n in g.nodes:
            spec = specs[n]
            executed = solution is not None and n in solution.executed
            row = {
                "node": n,
                "graph": g.id,
                "label": spec.label,
                "executed": executed,
                "resource": None,
                "resource_name": "N/A",
                "clock": None,
                "score": None,
                "conflicts": sorted(by_node.get(n, []),
                                    key=lambda d: d["partner"]) if executed else [],
            }
            if executed:
                picked = solution.choice[n]
                row["resource"] = picked
                row["resource_name"] = resources[picked].name or picked
                row["clock"] = solution.clock[n]
                row["score"] = resources[picked].effectiveness
            rows.append(row)
    return rows


# ----------------------------------------------------------------- CSV ----

def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def save_csv(instance: Instance, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    _write_csv(directory / "edges.csv",
               ["graph_id", "src", "dst", "t_min", "t_max"],
               [[g.id, e.src, e.dst, e.t_min, e.t_max]
                for g in instance.graphs for e in g.edges])
    specs = instance.node_map()
    _write_csv(directory / "nodes.csv",
               ["graph_id", "node_id", "label", "options"],
               [[g.id, n, specs[n].label, ";".join(specs[n].options)]
                for g in instance.graphs for n in g.nodes])
    _write_csv(directory / "resources.csv",
               ["resource_id", "name", "effectiveness", "amount"],
               [[r.id, r.name, r.effectiveness, r.amount]
                for r in instance.resources])
    _write_csv(directory / "interactions.csv",
               ["resource_a", "resource_b", "value_or_severity"],
               [[a, b, value] for (a, b), value in instance.interactions.pairs()])
    _write_csv(directory / "starts.csv",
               ["graph_id", "tau"],
               [[g.id, g.start_time] for g in instance.graphs])
    _write_csv(directory / COMBINER_FILE,
               ["time_window", "amount_floor"],
               [[instance.combiner.time_window, instance.combiner.amount_floor]])


def _read_rows(directory: Path, name: str, columns: int) -> list[tuple[int, list[str]]]:
    path = directory / name
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        for lineno, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if lineno == 1:
                continue  # header
            if len(row) != columns:
                raise ParseError(name, lineno,
                                 f"expected {columns} columns, got {len(row)}")
            rows.append((lineno, row))
    return rows


def _int_field(name: str, lineno: int, raw: str, what: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ParseError(name, lineno, f"{what} must be an integer, got {raw!r}")


def load_csv(directory, severity_map: SeverityMap | None = None) -> Instance:
    directory = Path(directory)
    for name in REQUIRED_FILES:
        if not (directory / name).is_file():
            raise ParseError(name, 0, "file missing")
    severity_map = severity_map or SeverityMap()

    graph_order: list[str] = []

    def see(graph_id: str) -> None:
        if graph_id not in graph_order:
            graph_order.append(graph_id)

    starts: dict[str, int] = {}
    for lineno, row in _read_rows(directory, "starts.csv", 2):
        see(row[0])
        starts[row[0]] = _int_field("starts.csv", lineno, row[1], "tau")

    node_rows = _read_rows(directory, "nodes.csv", 4)
    for _, row in node_rows:
        see(row[0])
    edge_rows = _read_rows(directory, "edges.csv", 5)
    for _, row in edge_rows:
        see(row[0])

    edges_by_graph: dict[str, list[Edge]] = {g: [] for g in graph_order}
    for lineno, row in edge_rows:
        edges_by_graph[row[0]].append(Edge(
            row[1], row[2],
            _int_field("edges.csv", lineno, row[3], "t_min"),
            _int_field("edges.csv", lineno, row[4], "t_max")))

    nodes_by_graph: dict[str, list[str]] = {g: [] for g in graph_order}
    specs: list[NodeSpec] = []
    for lineno, row in node_rows:
        graph_id, node_id, label, options = row
        nodes_by_graph[graph_id].append(node_id)
        option_ids = tuple(o for o in options.split(";") if o)
        specs.append(NodeSpec(node_id, graph_id, label, option_ids))

    resources = []
    for lineno, row in _read_rows(directory, "resources.csv", 4):
        resources.append(Resource(
            row[0], row[1],
            _int_field("resources.csv", lineno, row[2], "effectiveness"),
            _int_field("resources.csv", lineno, row[3], "amount")))

    entries: dict[tuple[str, str], tuple[int, int]] = {}
    for lineno, row in _read_rows(directory, "interactions.csv", 3):
        a, b, raw = row
        try:
            value = int(raw)
        except ValueError:
            try:
                value = severity_to_interaction(severity_map, raw)
            except UnknownSeverity:
                raise ParseError("interactions.csv", lineno,
                                 f"expected integer or severity token, got {raw!r}")
        key = (a, b) if a <= b else (b, a)
        if key in entries and entries[key][0] != value:
            raise ParseError("interactions.csv", lineno,
                             f"pair {key} already listed with value {entries[key][0]}")
        entries[key] = (value, lineno)

    combiner = ThresholdCombiner()
    combiner_path = directory / COMBINER_FILE
    if combiner_path.is_file():
        rows = _read_rows(directory, COMBINER_FILE, 2)
        if rows:
            lineno, row = rows[0]
            combiner = ThresholdCombiner(
                _int_field(COMBINER_FILE, lineno, row[0], "time_window"),
                _int_field(COMBINER_FILE, lineno, row[1], "amount_floor"))

    graphs = tuple(
        PathwayGraph(gid, nodes=tuple(nodes_by_graph.get(gid, ())),
                     edges=tuple(edges_by_graph.get(gid, ())),
                     start_time=starts.get(gid, 0))
        for gid in graph_order)
    instance = Instance(
        graphs=graphs, nodes=tuple(specs), resources=tuple(resources),
        interactions=InteractionTable(
            {k: v for k, (v, _) in sorted(entries.items())}),
        combiner=combiner)
    return _validated(instance)


# ----------------------------------------------------------------- DOT ----

def export_dot(instance: Instance, solution: Solution | None = None) -> str:
    """One cluster per graph; annotated with picked resources when solved."""
    resources = instance.resource_map()
    specs = instance.node_map()
    out = io.StringIO()
    out.write("digraph instance {\n")
    out.write("  rankdir=LR;\n")
    for g in instance.graphs:
        out.write(f"  subgraph cluster_{g.id} {{\n")
        out.write(f'    label="{g.id}";\n')
        for n in g.nodes:
            display = specs[n].label or n
            if solution is None:
                out.write(f'    {n} [label="{display}"];\n')
            elif n in solution.executed:
                picked = resources[solution.choice[n]]
                name = picked.name or picked.id
                out.write(f'    {n} [label="{display}\\n{name} @ {solution.clock[n]}"'
                          f", style=bold];\n")
            else:
                out.write(f'    {n} [label="{display}\\nN/A", style=dashed];\n')
        for e in g.edges:
            out.write(f'    {e.src} -> {e.dst} [label="[{e.t_min},{e.t_max}]"]\n')
        out.write("  }\n")
    if solution is not None:
        for c in solution.conflicts:
            out.write(f'  {c.node_a} -> {c.node_b} [style=dashed, color=red, '
                      f'constraint=false, label="{c.contribution}"]\n')
    out.write("}\n")
    return out.getvalue()


# ----------------------------------------------------------- generator ----

@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of the synthetic-instance generator. Deterministic per seed."""

    seed: int = 0
    graph_count: int = 2
    nodes_per_graph: int = 4
    branching: int = 2
    options_per_node: int = 2
    resource_count: int = 4
    interaction_density: float = 0.3
    severity_mix: tuple[float, float, float] = (0.2, 0.6, 0.2)  # minor, moderate, major
    effectiveness_range: tuple[int, int] = (-5, 10)
    amount_range: tuple[int, int] = (5, 40)
    window_spread: int = 3
    start_spread: int = 0
    start_stagger: int = 0  # graph i starts at i * stagger (plus any spread)
    combiner: ThresholdCombiner = ThresholdCombiner()
    severity_map: SeverityMap = SeverityMap()

    def validate(self) -> None:
        for field_name in ("graph_count", "nodes_per_graph", "branching",
                           "options_per_node", "resource_count"):
            if getattr(self, field_name) < 1:
                raise ValueError(f"{field_name} must be >= 1")
        if not 0.0 <= self.interaction_density <= 1.0:
            raise ValueError("interaction_density must be within [0, 1]")
        if any(p < 0 for p in self.severity_mix) or sum(self.severity_mix) <= 0:
            raise ValueError("severity_mix must be nonnegative proportions")


def generator_spec_from_dict(doc: dict) -> GeneratorSpec:
    kwargs = {}
    simple = ("seed", "graph_count", "nodes_per_graph", "branching",
              "options_per_node", "resource_count", "interaction_density",
              "window_spread", "start_spread", "start_stagger")
    for key in simple:
        if key in doc:
            kwargs[key] = doc[key]
    for key in ("severity_mix", "effectiveness_range", "amount_range"):
        if key in doc:
            kwargs[key] = tuple(doc[key])
    if "combiner" in doc:
        kwargs["combiner"] = ThresholdCombiner(
            int(doc["combiner"].get("time_window", 8)),
            int(doc["combiner"].get("amount_floor", 10)))
    return GeneratorSpec(**kwargs)


def generate_synthetic(spec: GeneratorSpec) -> Instance:
    """Layered random DAGs plus a severity-classified interaction table."""
    spec.validate()
    rng = random.Random(spec.seed)

    resources = []
    for i in range(spec.resource_count):
        rid = f"r{i:03d}"
        resources.append(Resource(
            rid, f"res-{i:03d}",
            rng.randint(*spec.effectiveness_range),
            rng.randint(*spec.amount_range)))
    resource_ids = [r.id for r in resources]

    graphs = []
    specs: list[NodeSpec] = []
    for gi in range(spec.graph_count):
        gid = f"G{gi + 1}"
        names = [f"g{gi + 1}n{j:02d}" for j in range(spec.nodes_per_graph)]
        edges = []
        for j in range(1, spec.nodes_per_graph):
            parent_count = rng.randint(1, min(spec.branching, j))
            parents = rng.sample(range(j), parent_count)
            for p in sorted(parents):
                t_min = rng.randint(0, spec.window_spread)
                t_max = t_min + rng.randint(0, spec.window_spread)
                edges.append(Edge(names[p], names[j], t_min, t_max))
        start = gi * spec.start_stagger
        if spec.start_spread:
            start += rng.randint(-spec.start_spread, spec.start_spread)
        graphs.append(PathwayGraph(gid, nodes=tuple(names), edges=tuple(edges),
                                   start_time=start))
        for name in names:
            k = min(spec.options_per_node, spec.resource_count)
            options = tuple(sorted(rng.sample(resource_ids, k)))
            specs.append(NodeSpec(name, gid, name, options))

    all_pairs = [(a, b) for i, a in enumerate(resource_ids)
                 for b in resource_ids[i + 1:]]
    k = round(spec.interaction_density * len(all_pairs))
    chosen = rng.sample(all_pairs, k) if k else []
    weights = list(spec.severity_mix)
    entries = []
    for a, b in sorted(chosen):
        severity = rng.choices(("minor", "moderate", "major"), weights)[0]
        entries.append((a, b, severity_to_interaction(spec.severity_map, severity)))

    instance = Instance(
        graphs=tuple(graphs), nodes=tuple(specs), resources=tuple(resources),
        interactions=InteractionTable.from_entries(entries),
        combiner=spec.combiner)
    return _validated(instance)


# ----------------------------------------------------- path-based loads ----

def load_instance(path) -> Instance:
    """Load a JSON instance file or a CSV bundle directory."""
    path = Path(path)
    if path.is_dir():
        return load_csv(path)
    return load_json(path.read_text(encoding="utf-8"))
