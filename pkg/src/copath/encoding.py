"""Deterministic SMT-LIB 2 artifact generation.

Four artifact kinds:

* ``full``        — the complete optimisation encoding of an instance:
                    path shape, orphan elimination, edge timing windows,
                    source clocks, resource labels and the score/objective
                    variables, optionally ending in ``(maximize obj)``.
* ``efficient``   — just the path-shape constraints over F_* selectors,
                    folded into one boolean ``efficient``.
* ``formal``      — the same selection semantics grounded from the
                    universally quantified conditions (all sources chosen,
                    exactly-one-child as at-least-one plus pairwise
                    at-most-one, orphan elimination with a source guard),
                    folded into one boolean ``formal``.
* ``equivalence`` — both definitions plus ``(assert (not (= efficient
                    formal)))``; an unsat verdict certifies the two
                    encodings agree on every selection.

Text generation is pure and byte-deterministic for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    Instance,
    InvalidGraph,
    InvalidInstance,
    PathwayGraph,
    Violation,
    ValidationReport,
    _check_graph_shape,
    graph_sources,
    require_valid,
)

STRATEGY_NATIVE = "native_maximize"
STRATEGY_SATISFACTION = "satisfaction_only"


@dataclass(frozen=True)
class VarEntity:
    """What an SMT variable stands for."""

    role: str  # node | clock | label | score | pair | objective | selector | flag
    node: str = ""
    partner: str = ""


@dataclass(frozen=True)
class SmtArtifact:
    kind: str  # full | efficient | formal | equivalence
    text: str
    var_map: dict[str, VarEntity] = field(default_factory=dict)


def smt_int(value: int) -> str:
    return str(value) if value >= 0 else f"(- {-value})"


def _conj(terms: list[str]) -> str:
    if not terms:
        return "true"
    if len(terms) == 1:
        return terms[0]
    return "(and " + " ".join(terms) + ")"


def _disj(terms: list[str]) -> str:
    if not terms:
        return "false"
    if len(terms) == 1:
        return terms[0]
    return "(or " + " ".join(terms) + ")"


def node_var(node: str) -> str:
    return f"node_{node}"


def clock_var(node: str) -> str:
    return f"clock_{node}"


def label_var(node: str) -> str:
    return f"label_{node}"


def score_var(node: str) -> str:
    return f"score_{node}"


def pair_var(node_a: str, node_b: str) -> str:
    return f"pair_{node_a}__{node_b}"


def selector_var(node: str) -> str:
    return f"F_{node}"


def _ordered_nodes(graphs) -> list[str]:
    return [n for g in graphs for n in g.nodes]


def _register(var_map: dict[str, VarEntity], name: str, entity: VarEntity) -> None:
    if name in var_map:
        raise InvalidInstance(ValidationReport(
            (Violation("smt-name-collision", name),)))
    var_map[name] = entity


def _exactly_one_child_dnf(graph: PathwayGraph, node: str, var) -> str:
    """One child on, all siblings off, written as a disjunction of conjunctions."""
    children = graph.children(node)
    disjuncts = []
    for child in children:
        parts = [f"(not {var(k)})" for k in children if k != child]
        parts.append(var(child))
        disjuncts.append(_conj(parts))
    return f"(=> {var(node)} {_disj(disjuncts)})"


def _orphan_rule(graph: PathwayGraph, node: str, var) -> str:
    parents = graph.parents(node)
    antecedent = _conj([f"(not {var(p)})" for p in parents])
    return f"(=> {antecedent} (not {var(node)}))"


def encode_full(instance: Instance, strategy: str = STRATEGY_NATIVE, *,
                prune_pairs: bool = True) -> SmtArtifact:
    """The whole optimisation problem as one SMT-LIB 2 document."""
    if strategy not in (STRATEGY_NATIVE, STRATEGY_SATISFACTION):
        raise ValueError(f"unknown strategy {strategy}")
    require_valid(instance)

    graphs = instance.graphs
    nodes = _ordered_nodes(graphs)
    specs = instance.node_map()
    resources = instance.resource_map()
    resource_index = {rid: i for i, rid in enumerate(instance.sorted_resource_ids())}
    window = instance.combiner.time_window
    floor = instance.combiner.amount_floor

    var_map: dict[str, VarEntity] = {}
    for n in nodes:
        _register(var_map, node_var(n), VarEntity("node", n))
    for n in nodes:
        _register(var_map, clock_var(n), VarEntity("clock", n))
    for n in nodes:
        _register(var_map, label_var(n), VarEntity("label", n))
    for n in nodes:
        _register(var_map, score_var(n), VarEntity("score", n))

    # Cross-graph pairs; each keeps the per-option-pair values resolved now.
    pairs: list[tuple[str, str, list[tuple[str, str, int]]]] = []
    for i1 in range(len(graphs)):
        for i2 in range(i1 + 1, len(graphs)):
            for j in graphs[i1].nodes:
                for k in graphs[i2].nodes:
                    cases = []
                    any_active = False
                    for r1 in specs[j].options:
                        for r2 in specs[k].options:
                            raw = instance.interactions.get(r1, r2)
                            passes_floor = (resources[r1].amount >= floor
                                            and resources[r2].amount >= floor)
                            value = raw if (raw != 0 and passes_floor) else 0
                            if value != 0:
                                any_active = True
                            cases.append((r1, r2, value))
                    if any_active or not prune_pairs:
                        pairs.append((j, k, cases))
    pairs.sort(key=lambda item: (item[0], item[1]))
    for j, k, _ in pairs:
        _register(var_map, pair_var(j, k), VarEntity("pair", j, k))
    _register(var_map, "obj", VarEntity("objective"))

    pairs_of_node: dict[str, list[str]] = {n: [] for n in nodes}
    for j, k, _ in pairs:
        pairs_of_node[j].append(pair_var(j, k))
        pairs_of_node[k].append(pair_var(j, k))

    lines: list[str] = []
    emit = lines.append
    emit("(set-logic QF_LIA)")

    for n in nodes:
        emit(f"(declare-fun {node_var(n)} () Bool)")
    for n in nodes:
        emit(f"(declare-fun {clock_var(n)} () Int)")
    for n in nodes:
        emit(f"(declare-fun {label_var(n)} () Int)")
    for n in nodes:
        emit(f"(declare-fun {score_var(n)} () Int)")
    for j, k, _ in pairs:
        emit(f"(declare-fun {pair_var(j, k)} () Int)")
    emit("(declare-fun obj () Int)")

    # Ranges every model already satisfies: executed clocks stay between the
    # graph start and start plus the sum of its maximal waits; labels index
    # the resource list; score and pair variables are always pinned to one
    # of their case constants or zero. Stating them keeps any backend's
    # integer search finite and tight.
    emit("; variable ranges")
    score_range: dict[str, tuple[int, int]] = {}
    for g in graphs:
        clock_lo = g.start_time
        clock_hi = g.start_time + sum(e.t_max for e in g.edges)
        for n in g.nodes:
            emit(f"(assert (and (>= {clock_var(n)} {smt_int(clock_lo)}) "
                 f"(<= {clock_var(n)} {smt_int(clock_hi)})))")
    label_hi = max(0, len(resource_index) - 1)
    for g in graphs:
        for n in g.nodes:
            emit(f"(assert (and (>= {label_var(n)} 0) "
                 f"(<= {label_var(n)} {label_hi})))")
    for g in graphs:
        for n in g.nodes:
            values = [resources[r].effectiveness for r in specs[n].options]
            lo, hi = min(0, min(values)), max(0, max(values))
            score_range[n] = (lo, hi)
            emit(f"(assert (and (>= {score_var(n)} {smt_int(lo)}) "
                 f"(<= {score_var(n)} {smt_int(hi)})))")
    pair_range: dict[str, tuple[int, int]] = {}
    for j, k, cases in pairs:
        values = [value for _, _, value in cases]
        lo, hi = min(0, min(values)), max(0, max(values))
        pair_range[pair_var(j, k)] = (lo, hi)
        emit(f"(assert (and (>= {pair_var(j, k)} {smt_int(lo)}) "
             f"(<= {pair_var(j, k)} {smt_int(hi)})))")
    obj_lo = (sum(lo for lo, _ in score_range.values())
              + sum(lo for lo, _ in pair_range.values()))
    obj_hi = (sum(hi for _, hi in score_range.values())
              + sum(hi for _, hi in pair_range.values()))
    emit(f"(assert (and (>= obj {smt_int(obj_lo)}) (<= obj {smt_int(obj_hi)})))")

    emit("; source selection")
    for g in graphs:
        (source,) = graph_sources(g)
        emit(f"(assert {node_var(source)})")
    if instance.pinned_true or instance.pinned_false:
        emit("; operator pins")
        for n in sorted(instance.pinned_true):
            emit(f"(assert {node_var(n)})")
        for n in sorted(instance.pinned_false):
            emit(f"(assert (not {node_var(n)}))")

    emit("; path shape: an executed node executes exactly one child")
    for g in graphs:
        for n in g.nodes:
            if g.children(n):
                emit(f"(assert {_exactly_one_child_dnf(g, n, node_var)})")

    emit("; orphan elimination: no executed node without an executed parent")
    for g in graphs:
        for n in g.nodes:
            if g.parents(n):
                emit(f"(assert {_orphan_rule(g, n, node_var)})")

    emit("; edge timing windows")
    for g in graphs:
        for e in g.edges:
            gap = f"(- {clock_var(e.dst)} {clock_var(e.src)})"
            emit(f"(assert (=> (and {node_var(e.src)} {node_var(e.dst)}) "
                 f"(and (>= {gap} {smt_int(e.t_min)}) (<= {gap} {smt_int(e.t_max)}))))")

    emit("; source clocks")
    for g in graphs:
        (source,) = graph_sources(g)
        emit(f"(assert (= {clock_var(source)} {smt_int(g.start_time)}))")

    emit("; resource choice domain")
    for g in graphs:
        for n in g.nodes:
            domain = _disj([f"(= {label_var(n)} {resource_index[r]})"
                            for r in specs[n].options])
            emit(f"(assert (=> {node_var(n)} {domain}))")

    emit("; zero scores of skipped nodes")
    for g in graphs:
        for n in g.nodes:
            zeros = [f"(= {score_var(n)} 0)"]
            zeros.extend(f"(= {p} 0)" for p in sorted(pairs_of_node[n]))
            emit(f"(assert (=> (not {node_var(n)}) {_conj(zeros)}))")

    emit("; effectiveness scores of executed nodes")
    for g in graphs:
        for n in g.nodes:
            for r in specs[n].options:
                emit(f"(assert (=> (and {node_var(n)} "
                     f"(= {label_var(n)} {resource_index[r]})) "
                     f"(= {score_var(n)} {smt_int(resources[r].effectiveness)})))")

    emit("; interaction scores of executed cross-graph pairs")
    for j, k, cases in pairs:
        name = pair_var(j, k)
        gap = f"(- {clock_var(k)} {clock_var(j)})"
        for r1, r2, value in cases:
            base_parts = [node_var(j), node_var(k),
                          f"(= {label_var(j)} {resource_index[r1]})",
                          f"(= {label_var(k)} {resource_index[r2]})"]
            if value == 0:
                emit(f"(assert (=> {_conj(base_parts)} (= {name} 0)))")
            else:
                near = base_parts + [f"(<= {gap} {smt_int(window)})",
                                     f"(>= {gap} {smt_int(-window)})"]
                far = base_parts + [f"(or (> {gap} {smt_int(window)}) "
                                    f"(< {gap} {smt_int(-window)}))"]
                emit(f"(assert (=> {_conj(near)} (= {name} {smt_int(value)})))")
                emit(f"(assert (=> {_conj(far)} (= {name} 0)))")

    emit("; objective")
    terms = [score_var(n) for n in nodes] + [pair_var(j, k) for j, k, _ in pairs]
    if not terms:
        emit("(assert (= obj 0))")
    elif len(terms) == 1:
        emit(f"(assert (= obj {terms[0]}))")
    else:
        emit(f"(assert (= obj (+ {' '.join(terms)})))")

    if strategy == STRATEGY_NATIVE:
        emit("(maximize obj)")
    emit("(check-sat)")
    emit("(get-value (obj))")
    for n in nodes:
        emit(f"(get-value ({node_var(n)}))")
    for n in nodes:
        emit(f"(get-value ({clock_var(n)}))")
    for n in nodes:
        emit(f"(get-value ({label_var(n)}))")

    return SmtArtifact("full", "\n".join(lines) + "\n", var_map)


def _validate_graph_family(graphs) -> None:
    seen: set[str] = set()
    for g in graphs:
        _check_graph_shape(g)
        overlap = seen & set(g.nodes)
        if overlap:
            raise InvalidGraph(f"node sets overlap: {sorted(overlap)}")
        seen.update(g.nodes)


def _selector_declarations(graphs, var_map) -> list[str]:
    lines = []
    for n in _ordered_nodes(graphs):
        _register(var_map, selector_var(n), VarEntity("selector", n))
        lines.append(f"(declare-fun {selector_var(n)} () Bool)")
    return lines


def _efficient_terms(graphs, *, drop_orphan_rule: bool = False) -> list[str]:
    terms = []
    for g in graphs:
        (source,) = graph_sources(g)
        terms.append(selector_var(source))
    for g in graphs:
        for n in g.nodes:
            if g.children(n):
                terms.append(_exactly_one_child_dnf(g, n, selector_var))
    if not drop_orphan_rule:
        for g in graphs:
            for n in g.nodes:
                if g.parents(n):
                    terms.append(_orphan_rule(g, n, selector_var))
    return terms


def _formal_terms(graphs) -> list[str]:
    terms = []
    # every source is selected
    for g in graphs:
        (source,) = graph_sources(g)
        terms.append(selector_var(source))
    # a selected non-sink has at least one selected child and no two of them
    for g in graphs:
        for n in g.nodes:
            children = g.children(n)
            if not children:
                continue
            parts = [_disj([selector_var(c) for c in children])]
            for i, c1 in enumerate(children):
                for c2 in children[i + 1:]:
                    parts.append(f"(not (and {selector_var(c1)} {selector_var(c2)}))")
            terms.append(f"(=> {selector_var(n)} {_conj(parts)})")
    # a non-source with no selected parent is not selected
    for g in graphs:
        for n in g.nodes:
            if g.parents(n):
                terms.append(_orphan_rule(g, n, selector_var))
    return terms


def encode_efficient(graphs, *, drop_orphan_rule: bool = False) -> SmtArtifact:
    """Path-shape constraints folded into the boolean ``efficient``."""
    graphs = tuple(graphs)
    _validate_graph_family(graphs)
    var_map: dict[str, VarEntity] = {}
    lines = ["(set-logic QF_LIA)"]
    lines += _selector_declarations(graphs, var_map)
    _register(var_map, "efficient", VarEntity("flag"))
    lines.append("(declare-fun efficient () Bool)")
    lines.append(f"(assert (= efficient {_conj(_efficient_terms(graphs, drop_orphan_rule=drop_orphan_rule))}))")
    lines.append("(check-sat)")
    return SmtArtifact("efficient", "\n".join(lines) + "\n", var_map)


def encode_formal(graphs) -> SmtArtifact:
    """Grounded selection conditions folded into the boolean ``formal``."""
    graphs = tuple(graphs)
    _validate_graph_family(graphs)
    var_map: dict[str, VarEntity] = {}
    lines = ["(set-logic QF_LIA)"]
    lines += _selector_declarations(graphs, var_map)
    _register(var_map, "formal", VarEntity("flag"))
    lines.append("(declare-fun formal () Bool)")
    lines.append(f"(assert (= formal {_conj(_formal_terms(graphs))}))")
    lines.append("(check-sat)")
    return SmtArtifact("formal", "\n".join(lines) + "\n", var_map)


def encode_equivalence(graphs, *, drop_orphan_rule: bool = False) -> SmtArtifact:
    """Assert the two encodings differ; unsat certifies they never do."""
    graphs = tuple(graphs)
    _validate_graph_family(graphs)
    var_map: dict[str, VarEntity] = {}
    lines = ["(set-logic QF_LIA)"]
    lines += _selector_declarations(graphs, var_map)
    _register(var_map, "efficient", VarEntity("flag"))
    _register(var_map, "formal", VarEntity("flag"))
    lines.append("(declare-fun efficient () Bool)")
    lines.append("(declare-fun formal () Bool)")
    lines.append(f"(assert (= efficient {_conj(_efficient_terms(graphs, drop_orphan_rule=drop_orphan_rule))}))")
    lines.append(f"(assert (= formal {_conj(_formal_terms(graphs))}))")
    lines.append("(assert (not (= efficient formal)))")
    lines.append("(check-sat)")
    for n in _ordered_nodes(graphs):
        lines.append(f"(get-value ({selector_var(n)}))")
    return SmtArtifact("equivalence", "\n".join(lines) + "\n", var_map)
