"""Shared test fixtures."""

import math

import networkx as nx
import pytest

from shared.config import SamplerConfig
from shared.graph_spec import (
    EdgeSpec,
    GraphSpec,
    MeasurementProgram,
    MeasurementStep,
    NodeSpec,
    graph_from_networkx,
)


@pytest.fixture
def sampler_config():
    return SamplerConfig(eta=1e-3, n_angles=None, threads=1, debug=True, cache=True, lp_eps=1e-7)


@pytest.fixture
def path3():
    return graph_from_networkx(nx.path_graph(3), theta=math.asin(0.1), phi=math.pi)


@pytest.fixture
def xy_program3():
    return MeasurementProgram(steps=[MeasurementStep(qubit=q, basis="XY") for q in range(3)])


@pytest.fixture
def adaptive_program3():
    return MeasurementProgram(
        steps=[
            MeasurementStep(qubit=0, basis="Z"),
            MeasurementStep(qubit=1, basis="XY", angle=math.pi / 4, flip_on=[0]),
            MeasurementStep(qubit=2, basis="XY", angle=0.3, flip_on=[0, 1]),
        ]
    )


@pytest.fixture
def two_pole_graph():
    return GraphSpec(
        nodes=[NodeSpec(id=0, theta=0.0), NodeSpec(id=1, theta=0.0)],
        edges=[EdgeSpec(a=0, b=1, phi=math.pi)],
    )


@pytest.fixture
def instance_files(tmp_path, path3, xy_program3):
    graph_path = tmp_path / "graph.json"
    program_path = tmp_path / "program.json"
    graph_path.write_text(path3.model_dump_json())
    program_path.write_text(xy_program3.model_dump_json())
    return str(graph_path), str(program_path)
