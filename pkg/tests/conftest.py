import sys

import pytest

from copath.model import (
    Edge,
    Instance,
    InteractionTable,
    NodeSpec,
    PathwayGraph,
    Resource,
    ThresholdCombiner,
)
from copath.solver import BackendConfig


def build_tiny() -> Instance:
    """Two tiny graphs: G1 = a->{b,c}, G2 = p->q, no interactions."""
    return Instance(
        graphs=(
            PathwayGraph("G1", nodes=("a", "b", "c"),
                         edges=(Edge("a", "b", 1, 2), Edge("a", "c", 0, 0)),
                         start_time=0),
            PathwayGraph("G2", nodes=("p", "q"),
                         edges=(Edge("p", "q", 0, 3),),
                         start_time=0),
        ),
        nodes=(
            NodeSpec("a", "G1", "a", ("r0",)),
            NodeSpec("b", "G1", "b", ("r1",)),
            NodeSpec("c", "G1", "c", ("r2",)),
            NodeSpec("p", "G2", "p", ("r3",)),
            NodeSpec("q", "G2", "q", ("r1",)),
        ),
        resources=(
            Resource("r0", "res r0", 5, 20),
            Resource("r1", "res r1", 3, 20),
            Resource("r2", "res r2", 4, 20),
            Resource("r3", "res r3", 2, 20),
        ),
        interactions=InteractionTable(),
        combiner=ThresholdCombiner(8, 10),
    )


def build_tiny_plus() -> Instance:
    """TINY with two negative interactions and a narrow time window."""
    tiny = build_tiny()
    return Instance(
        graphs=tiny.graphs,
        nodes=tiny.nodes,
        resources=tiny.resources,
        interactions=InteractionTable.from_entries(
            [("r1", "r3", -10), ("r2", "r3", -20)]),
        combiner=ThresholdCombiner(2, 10),
    )


def build_fig1() -> Instance:
    """Hospitalisation-vs-surgery branch plus a seven-day alternating chain."""
    hosp_edges = (
        Edge("n1", "n2", 0, 1),
        Edge("n1", "n3", 0, 1),
        Edge("n3", "n4", 2, 4),
    )
    chron_nodes = tuple(f"c{i}" for i in range(7))
    chron_edges = tuple(Edge(f"c{i}", f"c{i+1}", 1, 1) for i in range(6))
    node_specs = [
        NodeSpec("n1", "hosp", "admission", ("admit",)),
        NodeSpec("n2", "hosp", "non-surgical", ("d0",)),
        NodeSpec("n3", "hosp", "pre-surgical testing", ("d1", "d2")),
        NodeSpec("n4", "hosp", "surgery", ("surg",)),
    ]
    for i, node in enumerate(chron_nodes):
        drug = "d3" if i % 2 == 0 else "d4"
        node_specs.append(NodeSpec(node, "chronic", f"day {i}", (drug,)))
    return Instance(
        graphs=(
            PathwayGraph("hosp", nodes=("n1", "n2", "n3", "n4"),
                         edges=hosp_edges, start_time=0),
            PathwayGraph("chronic", nodes=chron_nodes,
                         edges=chron_edges, start_time=0),
        ),
        nodes=tuple(node_specs),
        resources=(
            Resource("admit", "admission", 0, 0),
            Resource("d0", "drug d0", 4, 20),
            Resource("d1", "drug d1", 6, 20),
            Resource("d2", "drug d2", 6, 20),
            Resource("d3", "drug d3", 2, 20),
            Resource("d4", "drug d4", 2, 20),
            Resource("surg", "surgery", 10, 50),
        ),
        interactions=InteractionTable.from_entries(
            [("d1", "d3", -6), ("d2", "d4", -5)]),
        combiner=ThresholdCombiner(2, 10),
    )


@pytest.fixture
def tiny() -> Instance:
    return build_tiny()


@pytest.fixture
def tiny_plus() -> Instance:
    return build_tiny_plus()


@pytest.fixture
def fig1() -> Instance:
    return build_fig1()


@pytest.fixture(scope="session")
def backend() -> BackendConfig:
    """The bundled reference backend, spoken to over the child-process protocol."""
    return BackendConfig(
        command=(sys.executable, "-m", "copath.refsolver"),
        timeout=120.0,
        supports_maximize=True,
    )
