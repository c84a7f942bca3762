import pytest
from hypothesis import given
from hypothesis import strategies as st

from copath.model import (
    Edge,
    Instance,
    InteractionTable,
    NodeSpec,
    PathwayGraph,
    Resource,
    SeverityMap,
    ThresholdCombiner,
)
from copath.scoring import (
    UnassignedNode,
    UnknownSeverity,
    eval_f,
    evaluate_objective,
    objective_bounds,
    severity_to_interaction,
)

COMBINER = ThresholdCombiner(time_window=8, amount_floor=10)


class TestEvalF:
    def test_distance_beyond_window_zeroes(self):
        assert eval_f(COMBINER, -1000, 9, 50, 50) == 0

    def test_low_amount_zeroes(self):
        assert eval_f(COMBINER, -5000, 2, 9, 50) == 0

    def test_boundaries_pass_through(self):
        assert eval_f(COMBINER, -1000, 8, 10, 10) == -1000

    def test_zero_interaction(self):
        assert eval_f(COMBINER, 0, 1, 100, 100) == 0

    @given(st.integers(0, 20), st.integers(0, 200), st.integers(0, 200))
    def test_zero_interaction_always_zero(self, distance, amount_a, amount_b):
        assert eval_f(COMBINER, 0, distance, amount_a, amount_b) == 0


class TestSeverity:
    def test_defaults(self):
        m = SeverityMap()
        assert severity_to_interaction(m, "minor") == -100
        assert severity_to_interaction(m, "moderate") == -1000
        assert severity_to_interaction(m, "major") == -5000

    def test_unknown_token(self):
        with pytest.raises(UnknownSeverity):
            severity_to_interaction(SeverityMap(), "severe")


class TestEvaluateObjective:
    def test_tiny_plus_assignment(self, tiny_plus):
        result = evaluate_objective(
            tiny_plus,
            {"a", "c", "p", "q"},
            {"a": 0, "c": 0, "p": 0, "q": 1},
            {"a": "r0", "c": "r2", "p": "r3", "q": "r1"},
        )
        assert (result.objective, result.effectiveness_total,
                result.interaction_total) == (-6, 14, -20)
        assert len(result.conflicts) == 1
        record = result.conflicts[0]
        assert (record.node_a, record.node_b) == ("c", "p")
        assert (record.resource_a, record.resource_b) == ("r2", "r3")
        assert record.time_distance == 0
        assert record.contribution == -20

    def test_empty_interactions(self, tiny):
        result = evaluate_objective(
            tiny,
            {"a", "c", "p", "q"},
            {"a": 0, "c": 0, "p": 0, "q": 1},
            {"a": "r0", "c": "r2", "p": "r3", "q": "r1"},
        )
        assert result.interaction_total == 0
        assert result.objective == 14

    def test_empty_executed(self, tiny_plus):
        result = evaluate_objective(tiny_plus, set(), {}, {})
        assert (result.objective, result.effectiveness_total,
                result.interaction_total, result.conflicts) == (0, 0, 0, ())

    def test_missing_clock_raises(self, tiny):
        with pytest.raises(UnassignedNode):
            evaluate_objective(tiny, {"a"}, {}, {"a": "r0"})

    def test_choice_outside_options_raises(self, tiny):
        with pytest.raises(UnassignedNode):
            evaluate_objective(tiny, {"a"}, {"a": 0}, {"a": "r1"})

    def test_intra_graph_interactions_never_score(self):
        # The only nonzero interaction pairs two nodes of the same graph.
        inst = Instance(
            graphs=(PathwayGraph("G1", nodes=("a", "b"), edges=(Edge("a", "b", 0, 0),)),
                    PathwayGraph("G2", nodes=("p",))),
            nodes=(NodeSpec("a", "G1", "a", ("x",)),
                   NodeSpec("b", "G1", "b", ("y",)),
                   NodeSpec("p", "G2", "p", ("z",))),
            resources=(Resource("x", "x", 1, 20), Resource("y", "y", 1, 20),
                       Resource("z", "z", 1, 20)),
            interactions=InteractionTable.from_entries([("x", "y", -50)]),
        )
        result = evaluate_objective(
            inst, {"a", "b", "p"}, {"a": 0, "b": 0, "p": 0},
            {"a": "x", "b": "y", "p": "z"})
        assert result.interaction_total == 0

    def test_symmetry_of_interaction_table(self, tiny_plus):
        flipped = Instance(
            graphs=tiny_plus.graphs, nodes=tiny_plus.nodes,
            resources=tiny_plus.resources,
            interactions=InteractionTable.from_entries(
                [("r3", "r1", -10), ("r3", "r2", -20)]),
            combiner=tiny_plus.combiner,
        )
        executed = {"a", "c", "p", "q"}
        clock = {"a": 0, "c": 0, "p": 0, "q": 1}
        choice = {"a": "r0", "c": "r2", "p": "r3", "q": "r1"}
        assert (evaluate_objective(tiny_plus, executed, clock, choice)
                == evaluate_objective(flipped, executed, clock, choice))

    def test_duplicate_conflicting_entry_rejected(self):
        with pytest.raises(ValueError):
            InteractionTable.from_entries([("x", "y", -1), ("y", "x", -2)])


class TestObjectiveBounds:
    def test_tiny_upper(self, tiny):
        lower, upper = objective_bounds(tiny)
        assert upper == 17  # 5 + 3 + 4 + 2 + 3, no positive interactions
        assert lower == 0

    @pytest.mark.parametrize("seed", range(8))
    def test_bounds_bracket_every_feasible_assignment(self, seed):
        import itertools
        import random

        from copath.dataio import GeneratorSpec, generate_synthetic
        from copath.model import enumerate_chordless_paths

        inst = generate_synthetic(GeneratorSpec(
            seed=seed, graph_count=2, nodes_per_graph=4, options_per_node=2,
            resource_count=4, interaction_density=0.5, window_spread=2))
        lower, upper = objective_bounds(inst)
        specs = inst.node_map()
        rng = random.Random(seed)
        edge_map = {g.id: {(e.src, e.dst): e for e in g.edges} for g in inst.graphs}
        for _ in range(20):
            executed, clock, choice = set(), {}, {}
            for g in inst.graphs:
                path = rng.choice(enumerate_chordless_paths(g))
                t = g.start_time
                for i, node in enumerate(path):
                    if i:
                        edge = edge_map[g.id][(path[i - 1], node)]
                        t += rng.randint(edge.t_min, edge.t_max)
                    executed.add(node)
                    clock[node] = t
                    choice[node] = rng.choice(specs[node].options)
            value = evaluate_objective(inst, executed, clock, choice).objective
            assert lower <= value <= upper

    def test_tiny_plus_lower(self, tiny_plus):
        lower, upper = objective_bounds(tiny_plus)
        assert lower == -30  # 0 + (-10) + (-20)
        assert upper == 17

    def test_all_zero_instance(self):
        inst = Instance(
            graphs=(PathwayGraph("G", nodes=("a",)),),
            nodes=(NodeSpec("a", "G", "a", ("r",)),),
            resources=(Resource("r", "r", 0, 20),),
        )
        assert objective_bounds(inst) == (0, 0)
