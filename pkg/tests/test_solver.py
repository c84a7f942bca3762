import math
import sys

import pytest

import copath.solver as solver_mod
from copath.encoding import encode_full
from copath.model import Infeasible, Instance
from copath.oracle import oracle_solve
from copath.scoring import objective_bounds
from copath.solver import (
    BackendConfig,
    BackendError,
    ModelMismatch,
    SolveOutcome,
    check_equivalence,
    default_backend,
    extract_solution,
    parse_transcript,
    run_artifact,
    solve_maximize,
)

PY = sys.executable


def stub_backend(script: str, timeout: float = 10.0) -> BackendConfig:
    return BackendConfig((PY, "-c", script), timeout=timeout)


class TestRunArtifact:
    def test_unsat_transcript(self):
        outcome = run_artifact(stub_backend("print('unsat')"), "(check-sat)")
        assert outcome.verdict == "unsat"
        assert outcome.values == {}

    def test_sat_transcript_with_values(self):
        script = "print('sat'); print('((obj 14))'); print('((node_a true))')"
        outcome = run_artifact(stub_backend(script), "(check-sat)")
        assert outcome.verdict == "sat"
        assert outcome.values == {"obj": 14, "node_a": True}

    def test_negative_value_parsing(self):
        script = "print('sat'); print('((obj (- 6)))')"
        outcome = run_artifact(stub_backend(script), "(check-sat)")
        assert outcome.values == {"obj": -6}

    def test_garbage_is_backend_error(self):
        outcome = run_artifact(stub_backend("print('(error \"boom\")')"), "x")
        assert outcome.verdict == "backend_error"
        assert "boom" in outcome.raw_transcript

    def test_timeout(self):
        config = stub_backend("import time; time.sleep(30)", timeout=0.3)
        outcome = run_artifact(config, "(check-sat)")
        assert outcome.verdict == "timeout"

    def test_missing_executable(self):
        config = BackendConfig(("/no/such/solver",), timeout=5.0)
        assert run_artifact(config, "(check-sat)").verdict == "backend_error"

    def test_errors_after_verdict_are_tolerated(self):
        script = "print('unsat'); print('(error \"model is not available\")')"
        outcome = run_artifact(stub_backend(script), "(check-sat)")
        assert outcome.verdict == "unsat"


def test_parse_transcript_recovers_from_partial_garbage():
    verdict, values = parse_transcript("junk (((\nsat\n((x 3))")
    assert verdict == "sat"
    assert values == {}  # unbalanced text falls back to verdict-only parsing


def test_default_backend_env(monkeypatch):
    monkeypatch.setenv("COPATH_BACKEND", "mysolver --flag")
    assert default_backend().command == ("mysolver", "--flag")
    monkeypatch.delenv("COPATH_BACKEND")
    assert default_backend().command == (PY, "-m", "copath.refsolver")


class TestSolveMaximize:
    def test_tiny_native(self, backend, tiny):
        solution = solve_maximize(backend, tiny, "native")
        assert solution.objective == 14
        assert solution.executed == {"a", "c", "p", "q"}
        assert solution.choice == {"a": "r0", "c": "r2", "p": "r3", "q": "r1"}
        assert solution.effectiveness_total == 14
        assert solution.interaction_total == 0

    def test_tiny_plus_native(self, backend, tiny_plus):
        solution = solve_maximize(backend, tiny_plus, "native")
        assert solution.objective == 3
        assert "b" in solution.executed

    def test_strategy_equality(self, backend, tiny_plus):
        native = solve_maximize(backend, tiny_plus, "native")
        iterative = solve_maximize(backend, tiny_plus, "iterative")
        assert native.objective == iterative.objective == 3

    def test_iterative_probe_budget(self, backend, tiny, monkeypatch):
        runs = []
        real = solver_mod.run_artifact

        def counting(config, artifact):
            outcome = real(config, artifact)
            runs.append(outcome)
            return outcome

        monkeypatch.setattr(solver_mod, "run_artifact", counting)
        solution = solve_maximize(backend, tiny, "iterative")
        assert solution.objective == 14
        initial = runs[0].values["obj"]
        _, upper = objective_bounds(tiny)
        assert upper == 17
        allowed = 1 + (math.ceil(math.log2(upper - initial)) if upper > initial else 0)
        assert len(runs) - 1 <= allowed

    def test_iterative_certifies_with_final_unsat(self, backend, tiny, monkeypatch):
        runs = []
        real = solver_mod.run_artifact

        def counting(config, artifact):
            outcome = real(config, artifact)
            runs.append((artifact if isinstance(artifact, str) else artifact.text,
                         outcome.verdict))
            return outcome

        monkeypatch.setattr(solver_mod, "run_artifact", counting)
        solve_maximize(backend, tiny, "iterative")
        # optimum 14 < upper 17, so an unsat probe at obj >= 15 must exist
        assert any("(assert (>= obj 15))" in text and verdict == "unsat"
                   for text, verdict in runs)

    def test_infeasible_under_contradictory_pins(self, backend, tiny):
        pinned = Instance(
            graphs=tiny.graphs, nodes=tiny.nodes, resources=tiny.resources,
            interactions=tiny.interactions, combiner=tiny.combiner,
            pinned_true=frozenset({"b", "c"}))
        with pytest.raises(Infeasible):
            solve_maximize(backend, pinned, "native")

    def test_native_requires_capable_backend(self, tiny):
        config = BackendConfig((PY, "-m", "copath.refsolver"),
                               supports_maximize=False)
        with pytest.raises(ValueError):
            solve_maximize(config, tiny, "native")

    def test_default_strategy_follows_capability(self, tiny):
        config = BackendConfig((PY, "-m", "copath.refsolver"), timeout=60.0,
                               supports_maximize=False)
        assert solve_maximize(config, tiny).objective == 14

    def test_unpruned_encoding_same_optimum(self, backend, tiny_plus):
        art = encode_full(tiny_plus, prune_pairs=False)
        outcome = run_artifact(backend, art)
        assert outcome.verdict == "sat"
        solution = extract_solution(tiny_plus, outcome, art.var_map)
        assert solution.objective == 3

    @pytest.mark.parametrize("seed", [2, 5, 11])
    def test_pruning_soundness_on_random_instances(self, backend, seed):
        from copath.dataio import GeneratorSpec, generate_synthetic
        inst = generate_synthetic(GeneratorSpec(
            seed=seed, graph_count=2, nodes_per_graph=4, options_per_node=2,
            resource_count=5, interaction_density=0.4, amount_range=(5, 30)))
        pruned = encode_full(inst, prune_pairs=True)
        unpruned = encode_full(inst, prune_pairs=False)
        values = []
        for art in (pruned, unpruned):
            outcome = run_artifact(backend, art)
            assert outcome.verdict == "sat"
            values.append(extract_solution(inst, outcome, art.var_map).objective)
        assert values[0] == values[1]

    def test_timeout_propagates(self, tiny):
        config = stub_backend("import time; time.sleep(30)", timeout=0.3)
        config = BackendConfig(config.command, timeout=0.3, supports_maximize=True)
        with pytest.raises(solver_mod.SolveTimeout):
            solve_maximize(config, tiny, "native")


class TestExtractSolution:
    def test_requires_sat(self, tiny):
        art = encode_full(tiny)
        with pytest.raises(ValueError):
            extract_solution(tiny, SolveOutcome("unsat"), art.var_map)

    def test_objective_mismatch_detected(self, backend, tiny):
        art = encode_full(tiny)
        outcome = run_artifact(backend, art)
        doctored = SolveOutcome("sat", dict(outcome.values, obj=99),
                                outcome.raw_transcript)
        with pytest.raises(ModelMismatch):
            extract_solution(tiny, doctored, art.var_map)

    def test_label_of_unexecuted_node_ignored(self, backend, tiny):
        art = encode_full(tiny)
        outcome = run_artifact(backend, art)
        skipped = next(e.node for n, e in art.var_map.items()
                       if e.role == "node" and outcome.values[n] is False)
        doctored = SolveOutcome(
            "sat", dict(outcome.values, **{f"label_{skipped}": 9999}),
            outcome.raw_transcript)
        solution = extract_solution(tiny, doctored, art.var_map)
        assert skipped not in solution.choice


class TestCheckEquivalence:
    def test_tiny_equivalent(self, backend, tiny):
        assert check_equivalence(backend, tiny.graphs).status == "equivalent"

    def test_fig1_equivalent(self, backend, fig1):
        assert check_equivalence(backend, fig1.graphs).status == "equivalent"

    def test_mutation_yields_counterexample_on_fig1(self, backend, fig1):
        outcome = check_equivalence(backend, fig1.graphs, drop_orphan_rule=True)
        assert outcome.status == "counterexample"
        # the separating selection contains an orphan: a selected non-source
        # whose parents are all unselected
        selection = outcome.selection
        orphans = []
        for g in fig1.graphs:
            for n in g.nodes:
                parents = g.parents(n)
                if parents and selection.get(n) and \
                        not any(selection.get(p) for p in parents):
                    orphans.append(n)
        assert orphans

    def test_empty_graph_list(self, backend):
        assert check_equivalence(backend, ()).status == "equivalent"

    def test_inconclusive_on_timeout(self, tiny):
        config = stub_backend("import time; time.sleep(30)", timeout=0.3)
        assert check_equivalence(config, tiny.graphs).status == "inconclusive"

    def test_backend_error_raises(self, tiny):
        config = stub_backend("print('gibberish')")
        with pytest.raises(BackendError):
            check_equivalence(config, tiny.graphs)


def test_solver_solutions_pass_walk_and_windows(backend, tiny, tiny_plus, fig1):
    from copath.model import audit_solution
    for inst in (tiny, tiny_plus, fig1):
        solution = solve_maximize(backend, inst, "native")
        assert audit_solution(inst, solution) == []


def test_solver_matches_oracle_on_fixtures(backend, tiny, tiny_plus, fig1):
    for inst in (tiny, tiny_plus, fig1):
        assert (solve_maximize(backend, inst, "native").objective
                == oracle_solve(inst).optimum)
