"""Acceptance gate.

One test per criterion, run in order; each prints a PASS line on success.
The UI contract (criterion 10) lives with the frontend package; everything
here runs with no UI built.
"""

import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest

from copath.dataio import (
    GeneratorSpec,
    generate_synthetic,
    load_csv,
    load_json,
    save_csv,
    save_json,
)
from copath.model import (
    Edge,
    Instance,
    InteractionTable,
    NodeSpec,
    PathwayGraph,
    Resource,
    SeverityMap,
    ThresholdCombiner,
    audit_solution,
)
from copath.oracle import BudgetExceeded, oracle_solve
from copath.scoring import eval_f, severity_to_interaction
from copath.solver import BackendConfig, check_equivalence, solve_maximize
from copath.whatif import WhatIfDelta, resolve

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
ORACLE_BUDGET = 150_000
WORKERS = 3


def load_fixture(name: str) -> Instance:
    return load_json((FIXTURES / f"{name}.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def state(backend):
    return {
        "backend": backend,
        "instances": [],   # (instance, oracle result)
        "solutions": [],   # (instance, solution) audited by criterion 4
    }


def random_small_spec(seed: int) -> GeneratorSpec:
    """Criterion 1 envelope: <=3 graphs, <=8 nodes each, <=3 options,
    edge slack <=3, interaction density <=0.3."""
    rng = random.Random(seed * 7919 + 17)
    return GeneratorSpec(
        seed=seed,
        graph_count=rng.randint(1, 3),
        nodes_per_graph=rng.randint(1, 6),
        branching=rng.randint(1, 2),
        options_per_node=rng.randint(1, 3),
        resource_count=rng.randint(2, 6),
        interaction_density=rng.uniform(0.0, 0.3),
        severity_mix=(0.3, 0.5, 0.2),
        effectiveness_range=(-4, 8),
        amount_range=(5, 30),
        window_spread=rng.randint(0, 2),
        start_spread=rng.randint(0, 3),
        combiner=ThresholdCombiner(rng.randint(1, 8), 10),
    )


def test_criterion_01_oracle_smt_agreement(state):
    started = time.time()
    seed = 0
    while len(state["instances"]) < 100 and seed < 1000:
        instance = generate_synthetic(random_small_spec(seed))
        seed += 1
        try:
            result = oracle_solve(instance, budget=ORACLE_BUDGET)
        except BudgetExceeded:
            continue
        state["instances"].append((instance, result))
    assert len(state["instances"]) == 100

    backend = state["backend"]

    def solve_one(item):
        instance, oracle_result = item
        solution = solve_maximize(backend, instance, "native")
        return instance, oracle_result, solution

    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        outcomes = list(pool.map(solve_one, state["instances"]))
    mismatches = [
        (oracle_result.optimum, solution.objective)
        for _, oracle_result, solution in outcomes
        if solution.objective != oracle_result.optimum
    ]
    assert mismatches == []
    for instance, _, solution in outcomes:
        state["solutions"].append((instance, solution))
    elapsed = time.time() - started
    assert elapsed <= 600, f"criterion 1 took {elapsed:.0f}s"
    print(f"ACCEPTANCE criterion 1 (oracle/SMT agreement, 100 instances,"
          f" {elapsed:.0f}s): PASS")


def test_criterion_02_strategy_equivalence(state):
    assert state["instances"], "criterion 1 must run first"
    backend = state["backend"]

    def solve_one(item):
        instance, oracle_result = item
        solution = solve_maximize(backend, instance, "iterative")
        return instance, oracle_result, solution

    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        outcomes = list(pool.map(solve_one, state["instances"]))
    for instance, oracle_result, solution in outcomes:
        assert solution.objective == oracle_result.optimum
        state["solutions"].append((instance, solution))
    print("ACCEPTANCE criterion 2 (native and iterative strategies agree"
          " on all 100): PASS")


def random_dag_family(seed: int):
    """Up to 60 nodes across several graphs, for the equivalence checks."""
    rng = random.Random(seed * 6007 + 5)
    graph_count = rng.randint(3, 5)
    spec = GeneratorSpec(
        seed=seed,
        graph_count=graph_count,
        nodes_per_graph=min(60 // graph_count, rng.randint(8, 15)),
        branching=rng.randint(2, 3),
        options_per_node=1,
        resource_count=2,
        interaction_density=0.0,
    )
    return generate_synthetic(spec).graphs


def test_criterion_03_encoding_equivalence(state):
    backend = state["backend"]
    tiny = load_fixture("tiny")
    fig1 = load_fixture("fig1")

    for name, graphs in (("tiny", tiny.graphs), ("fig1", fig1.graphs)):
        started = time.time()
        outcome = check_equivalence(backend, graphs)
        elapsed = time.time() - started
        assert outcome.status == "equivalent", name
        assert elapsed <= 60, f"{name} equivalence took {elapsed:.0f}s"

    # The orphan-rule mutation must be caught wherever it is detectable.
    # FIG1 offers an orphanable node (skipping the surgery branch frees n4).
    assert check_equivalence(backend, fig1.graphs,
                             drop_orphan_rule=True).status == "counterexample"
    # On TINY every non-source node is a child of a forced-true source, so
    # no orphan selection exists and the mutation is genuinely undetectable.
    assert check_equivalence(backend, tiny.graphs,
                             drop_orphan_rule=True).status == "equivalent"

    verified = 0
    seed = 0
    while verified < 25 and seed < 120:
        graphs = random_dag_family(seed)
        seed += 1
        mutated = check_equivalence(backend, graphs, drop_orphan_rule=True)
        if mutated.status != "counterexample":
            continue  # family without an orphanable branch; not a detector case
        started = time.time()
        outcome = check_equivalence(backend, graphs)
        elapsed = time.time() - started
        assert outcome.status == "equivalent"
        assert elapsed <= 60, f"equivalence run took {elapsed:.0f}s"
        verified += 1
    assert verified == 25
    print("ACCEPTANCE criterion 3 (encoding equivalence on TINY, FIG1 and"
          " 25 random DAG families; mutation detected): PASS")


def test_criterion_04_walk_contract_zero_violations(state):
    assert len(state["solutions"]) >= 200, "criteria 1-2 must run first"
    violations = []
    for instance, solution in state["solutions"]:
        issues = audit_solution(instance, solution)
        if issues:
            violations.append(issues)
    assert violations == []
    print(f"ACCEPTANCE criterion 4 (walk/choice/window/source-clock checks"
          f" on {len(state['solutions'])} solutions, zero violations): PASS")


def test_criterion_05_threshold_contract():
    combiner = ThresholdCombiner(time_window=8, amount_floor=10)
    assert eval_f(combiner, -1000, 9, 50, 50) == 0
    assert eval_f(combiner, -5000, 2, 9, 50) == 0
    assert eval_f(combiner, -1000, 8, 10, 10) == -1000
    assert eval_f(combiner, 0, 1, 100, 100) == 0
    print("ACCEPTANCE criterion 5 (threshold combiner contract incl. both"
          " boundaries): PASS")


def _conflict_decomposition_instance() -> Instance:
    """Two forced chains with exactly two moderate and one minor conflict."""
    severity = SeverityMap()
    chain_a = ("x1", "x2", "x3")
    chain_b = ("y1", "y2", "y3")
    choices = {"x1": "mA", "x2": "mB", "x3": "mC",
               "y1": "mD", "y2": "mE", "y3": "mF"}
    return Instance(
        graphs=(
            PathwayGraph("GA", nodes=chain_a,
                         edges=(Edge("x1", "x2", 0, 0), Edge("x2", "x3", 0, 0))),
            PathwayGraph("GB", nodes=chain_b,
                         edges=(Edge("y1", "y2", 0, 0), Edge("y2", "y3", 0, 0))),
        ),
        nodes=tuple(NodeSpec(n, "GA" if n.startswith("x") else "GB", n,
                             (choices[n],))
                    for n in chain_a + chain_b),
        resources=tuple(Resource(rid, rid, 0, 20)
                        for rid in ("mA", "mB", "mC", "mD", "mE", "mF")),
        interactions=InteractionTable.from_entries([
            ("mA", "mD", severity_to_interaction(severity, "moderate")),
            ("mB", "mE", severity_to_interaction(severity, "moderate")),
            ("mC", "mF", severity_to_interaction(severity, "minor")),
        ]),
        combiner=ThresholdCombiner(8, 10),
    )


def test_criterion_06_conflict_decomposition(state):
    instance = _conflict_decomposition_instance()
    assert oracle_solve(instance).optimum == -2100
    solution = solve_maximize(state["backend"], instance, "native")
    assert solution.interaction_total == -2100
    contributions = sorted(c.contribution for c in solution.conflicts)
    assert contributions == [-1000, -1000, -100]
    state["solutions"].append((instance, solution))
    print("ACCEPTANCE criterion 6 (two moderate plus one minor conflict"
          " total -2100): PASS")


def test_criterion_07_offset_behaviour(state):
    backend = state["backend"]
    tiny_plus = load_fixture("tiny_plus")

    baseline_oracle = oracle_solve(tiny_plus)
    assert baseline_oracle.optimum == 3
    assert "b" in baseline_oracle.witness.executed

    delta = WhatIfDelta(start_overrides={"G2": -6})
    from copath.whatif import apply_delta
    shifted_oracle = oracle_solve(apply_delta(tiny_plus, delta))
    assert shifted_oracle.optimum == 14
    assert "c" in shifted_oracle.witness.executed

    baseline = solve_maximize(backend, tiny_plus, "native")
    assert baseline.objective == 3
    solution, diff = resolve(backend, tiny_plus, delta, baseline)
    assert solution.objective == 14
    g1 = next(g for g in diff.graphs if g.graph == "G1")
    assert g1.nodes_added == ("c",) and g1.nodes_dropped == ("b",)
    state["solutions"].append((tiny_plus, baseline))
    print("ACCEPTANCE criterion 7 (start offset flips the optimum from 3"
          " via a->b to 14 via a->c, diff reports the switch): PASS")


SCALE_SPEC = GeneratorSpec(
    seed=41,
    graph_count=5,
    nodes_per_graph=12,
    branching=2,
    options_per_node=3,
    resource_count=127,
    interaction_density=3481 / 8001,
    severity_mix=(178 / 3481, 3033 / 3481, 270 / 3481),
    window_spread=1,
    start_stagger=12,  # conditions diagnosed over time; neighbours overlap
)


def test_criterion_08_scaled_runtime(state):
    instance = generate_synthetic(SCALE_SPEC)
    assert len(instance.graphs) == 5
    assert len(instance.nodes) == 60
    assert len(instance.resources) == 127
    count = len(instance.interactions.entries)
    assert abs(count - 3481) <= 0.02 * 3481
    backend = BackendConfig(state["backend"].command, timeout=120.0,
                            supports_maximize=True)
    started = time.time()
    solution = solve_maximize(backend, instance, "native")
    elapsed = time.time() - started
    assert elapsed <= 120, f"scale solve took {elapsed:.0f}s"
    assert audit_solution(instance, solution) == []
    state["solutions"].append((instance, solution))
    print(f"ACCEPTANCE criterion 8 (5 graphs / 60 nodes / 127 resources /"
          f" {count} interactions solved to optimum {solution.objective}"
          f" in {elapsed:.0f}s <= 120s): PASS")


def test_criterion_09_io_laws(tmp_path):
    for name in ("tiny", "tiny_plus", "fig1"):
        instance = load_fixture(name)
        assert load_json(save_json(instance)) == instance
        bundle = tmp_path / name
        save_csv(instance, bundle)
        assert load_csv(bundle) == instance
    # severity tokens resolve through the default map
    bundle = tmp_path / "severity"
    save_csv(load_fixture("tiny"), bundle)
    (bundle / "interactions.csv").write_text(
        "resource_a,resource_b,value_or_severity\nr0,r2,moderate\n",
        encoding="utf-8")
    assert load_csv(bundle).interactions.get("r0", "r2") == -1000
    print("ACCEPTANCE criterion 9 (CSV and JSON round-trips are identities;"
          " severity token moderate loads as -1000): PASS")
