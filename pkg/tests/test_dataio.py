import json

import pytest

from copath.dataio import (
    GeneratorSpec,
    ParseError,
    ValidationError,
    export_dot,
    generate_synthetic,
    generator_spec_from_dict,
    instance_from_dict,
    load_csv,
    load_instance,
    load_json,
    save_csv,
    save_json,
    solution_from_dict,
    solution_records,
    solution_to_dict,
)
from copath.model import Edge, SeverityMap
from copath.oracle import oracle_solve


class TestJsonRoundTrip:
    def test_identity_on_fixtures(self, tiny, tiny_plus, fig1):
        for inst in (tiny, tiny_plus, fig1):
            assert load_json(save_json(inst)) == inst

    def test_missing_graphs_key(self):
        with pytest.raises(ParseError):
            load_json(json.dumps({"nodes": [], "resources": []}))

    def test_unknown_extra_keys_ignored(self, tiny):
        doc = json.loads(save_json(tiny))
        doc["future_field"] = {"anything": 1}
        assert instance_from_dict(doc) == tiny

    def test_malformed_json(self):
        with pytest.raises(ParseError):
            load_json("{not json")

    def test_invalid_instance_rejected(self, tiny):
        doc = json.loads(save_json(tiny))
        doc["graphs"][0]["edges"][0]["t_min"] = 99  # t_min > t_max
        with pytest.raises(ValidationError):
            instance_from_dict(doc)

    def test_pins_round_trip(self, tiny):
        from copath.model import Instance
        pinned = Instance(
            graphs=tiny.graphs, nodes=tiny.nodes, resources=tiny.resources,
            interactions=tiny.interactions, combiner=tiny.combiner,
            pinned_true=frozenset({"b"}))
        assert load_json(save_json(pinned)) == pinned

    def test_solution_round_trip(self, tiny):
        solution = oracle_solve(tiny).witness
        assert solution_from_dict(solution_to_dict(solution)) == solution


class TestCsv:
    def test_round_trip_identity(self, tmp_path, tiny, tiny_plus, fig1):
        for i, inst in enumerate((tiny, tiny_plus, fig1)):
            directory = tmp_path / f"bundle{i}"
            save_csv(inst, directory)
            assert load_csv(directory) == inst

    def test_edge_row_parsing(self, tmp_path, tiny):
        save_csv(tiny, tmp_path)
        loaded = load_csv(tmp_path)
        g1 = loaded.graph_map()["G1"]
        assert Edge("a", "b", 1, 2) in g1.edges

    def test_window_inverted_rejected(self, tmp_path, tiny):
        save_csv(tiny, tmp_path)
        edges = (tmp_path / "edges.csv").read_text()
        edges = edges.replace("G1,a,b,1,2", "G1,a,b,3,2")
        (tmp_path / "edges.csv").write_text(edges)
        with pytest.raises(ValidationError) as err:
            load_csv(tmp_path)
        assert any(v.rule == "edge-window-inverted"
                   for v in err.value.report.violations)

    def test_severity_tokens(self, tmp_path, tiny):
        save_csv(tiny, tmp_path)
        (tmp_path / "interactions.csv").write_text(
            "resource_a,resource_b,value_or_severity\n"
            "r0,r2,moderate\nr1,r3,minor\nr2,r3,-42\n")
        loaded = load_csv(tmp_path)
        assert loaded.interactions.get("r0", "r2") == -1000
        assert loaded.interactions.get("r1", "r3") == -100
        assert loaded.interactions.get("r2", "r3") == -42

    def test_custom_severity_map(self, tmp_path, tiny):
        save_csv(tiny, tmp_path)
        (tmp_path / "interactions.csv").write_text(
            "resource_a,resource_b,value_or_severity\nr0,r2,major\n")
        loaded = load_csv(tmp_path, severity_map=SeverityMap(major=-7))
        assert loaded.interactions.get("r0", "r2") == -7

    def test_unknown_severity_token(self, tmp_path, tiny):
        save_csv(tiny, tmp_path)
        (tmp_path / "interactions.csv").write_text(
            "resource_a,resource_b,value_or_severity\nr0,r2,severe\n")
        with pytest.raises(ParseError) as err:
            load_csv(tmp_path)
        assert err.value.file == "interactions.csv"
        assert err.value.line == 2

    def test_missing_file(self, tmp_path, tiny):
        save_csv(tiny, tmp_path)
        (tmp_path / "starts.csv").unlink()
        with pytest.raises(ParseError):
            load_csv(tmp_path)

    def test_missing_start_row_defaults_to_zero(self, tmp_path, tiny):
        save_csv(tiny, tmp_path)
        (tmp_path / "starts.csv").write_text("graph_id,tau\nG1,0\n")
        loaded = load_csv(tmp_path)
        assert loaded.graph_map()["G2"].start_time == 0

    def test_missing_combiner_defaults(self, tmp_path, tiny_plus):
        save_csv(tiny_plus, tmp_path)
        (tmp_path / "combiner.csv").unlink()
        loaded = load_csv(tmp_path)
        assert (loaded.combiner.time_window, loaded.combiner.amount_floor) == (8, 10)

    def test_conflicting_duplicate_interaction(self, tmp_path, tiny):
        save_csv(tiny, tmp_path)
        (tmp_path / "interactions.csv").write_text(
            "resource_a,resource_b,value_or_severity\nr0,r2,-5\nr2,r0,-6\n")
        with pytest.raises(ParseError):
            load_csv(tmp_path)


class TestDot:
    def test_plain_edge_format(self, tiny):
        assert 'a -> b [label="[1,2]"]' in export_dot(tiny)

    def test_unexecuted_node_marked_na(self, tiny):
        solution = oracle_solve(tiny).witness  # optimum runs a->c, so b is off
        dot = export_dot(tiny, solution)
        b_line = next(l for l in dot.splitlines() if l.strip().startswith("b ["))
        assert "N/A" in b_line

    def test_executed_node_carries_resource_and_clock(self, tiny):
        dot = export_dot(tiny, oracle_solve(tiny).witness)
        c_line = next(l for l in dot.splitlines() if l.strip().startswith("c ["))
        assert "res r2" in c_line and "@ 0" in c_line

    def test_empty_instance(self):
        from copath.model import Instance
        assert export_dot(Instance()) == "digraph instance {\n  rankdir=LR;\n}\n"

    def test_conflict_edges_drawn(self, tiny_plus):
        solution = oracle_solve(tiny_plus).witness
        dot = export_dot(tiny_plus, solution)
        assert "b -> p" in dot and "color=red" in dot


class TestSolutionRecords:
    def test_panel_fields(self, tiny_plus):
        solution = oracle_solve(tiny_plus).witness
        rows = {r["node"]: r for r in solution_records(tiny_plus, solution)}
        assert rows["b"]["executed"] is True
        assert rows["b"]["resource"] == "r1"
        assert rows["b"]["score"] == 3
        assert rows["b"]["conflicts"][0]["partner"] == "p"
        assert rows["b"]["conflicts"][0]["contribution"] == -10
        assert rows["c"]["executed"] is False
        assert rows["c"]["resource_name"] == "N/A"

    def test_no_solution(self, tiny):
        rows = solution_records(tiny, None)
        assert all(r["resource_name"] == "N/A" for r in rows)


class TestGenerator:
    def test_deterministic(self):
        spec = GeneratorSpec(seed=7, graph_count=3, nodes_per_graph=5,
                             resource_count=6, interaction_density=0.5)
        assert save_json(generate_synthetic(spec)) == save_json(generate_synthetic(spec))

    def test_single_node_instance(self):
        inst = generate_synthetic(GeneratorSpec(seed=1, graph_count=1,
                                                nodes_per_graph=1))
        assert len(inst.graphs) == 1
        assert len(inst.graphs[0].nodes) == 1

    def test_interaction_count_tracks_density(self):
        spec = GeneratorSpec(seed=3, resource_count=127,
                             interaction_density=3481 / 8001,
                             graph_count=2, nodes_per_graph=3)
        inst = generate_synthetic(spec)
        assert len(inst.resources) == 127
        count = len(inst.interactions.entries)
        assert abs(count - 3481) <= 0.02 * 3481

    def test_generated_instances_validate(self):
        from copath.model import validate_instance
        for seed in range(10):
            inst = generate_synthetic(GeneratorSpec(
                seed=seed, graph_count=3, nodes_per_graph=6, branching=3,
                options_per_node=3, resource_count=8, interaction_density=0.3))
            assert validate_instance(inst).ok

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            generate_synthetic(GeneratorSpec(graph_count=0))
        with pytest.raises(ValueError):
            generate_synthetic(GeneratorSpec(interaction_density=1.5))

    def test_spec_from_dict(self):
        spec = generator_spec_from_dict(
            {"seed": 9, "graph_count": 4, "severity_mix": [1, 2, 1],
             "combiner": {"time_window": 4}})
        assert spec.seed == 9
        assert spec.graph_count == 4
        assert spec.severity_mix == (1, 2, 1)
        assert spec.combiner.time_window == 4


def test_load_instance_dispatches(tmp_path, tiny):
    json_path = tmp_path / "tiny.json"
    json_path.write_text(save_json(tiny))
    assert load_instance(json_path) == tiny
    bundle = tmp_path / "bundle"
    save_csv(tiny, bundle)
    assert load_instance(bundle) == tiny
