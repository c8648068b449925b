"""Tests for the branch-sampling simulator."""

import dataclasses
import math

import networkx as nx
import pytest

from oracle.dense import exact_distribution
from sampler.engine import Sampler, run_batch, run_shot, tv_bound, tv_distance
from shared.errors import AdmissionRejected, MarginTooSmallError, ProgramError
from shared.graph_spec import (
    EdgeSpec,
    GraphSpec,
    MeasurementProgram,
    MeasurementStep,
    NodeSpec,
    graph_from_networkx,
)
from shared.growth_law import lambda_of_phi

ETA = 1e-3


def xy_chain_program(n: int) -> MeasurementProgram:
    """XY on every qubit, each angle flipped by the previous outcome."""
    steps = [MeasurementStep(qubit=0, basis="XY", angle=0.2)]
    for q in range(1, n):
        steps.append(MeasurementStep(qubit=q, basis="XY", angle=0.2 + 0.7 * q, flip_on=[q - 1]))
    return MeasurementProgram(steps=steps)


def mixed_program(n: int) -> MeasurementProgram:
    """Adaptive XY measurements with a Z on every third qubit starting at qubit 1."""
    steps = []
    for q in range(n):
        if q % 3 == 1:
            steps.append(MeasurementStep(qubit=q, basis="Z"))
        else:
            steps.append(MeasurementStep(qubit=q, basis="XY", angle=0.2 + 0.7 * q, flip_on=list(range(q))))
    return MeasurementProgram(steps=steps)


def admissible_theta(g: nx.Graph, phi: float = math.pi) -> float:
    d_max = max(dict(g.degree).values())
    return math.asin(0.9 * (lambda_of_phi(phi) * (1 + ETA)) ** -d_max)


class TestSamplerSetup:
    def test_consumed_qubit(self, path3, sampler_config):
        prog = MeasurementProgram(
            steps=[MeasurementStep(qubit=0, basis="Z"), MeasurementStep(qubit=0, basis="XY")]
        )
        with pytest.raises(ProgramError):
            Sampler(path3, prog, sampler_config)

    def test_zero_margin(self, path3, xy_program3, sampler_config):
        with pytest.raises(MarginTooSmallError):
            Sampler(path3, xy_program3, dataclasses.replace(sampler_config, eta=0.0))

    def test_coarse_polygon(self, path3, xy_program3, sampler_config):
        with pytest.raises(MarginTooSmallError):
            Sampler(path3, xy_program3, dataclasses.replace(sampler_config, n_angles=8))

    def test_admission_rejected(self, xy_program3, sampler_config):
        g = graph_from_networkx(nx.path_graph(3), theta=math.asin(0.3), phi=math.pi)
        with pytest.raises(AdmissionRejected) as excinfo:
            Sampler(g, xy_program3, sampler_config)
        assert excinfo.value.report.violating_nodes == [1]

    def test_plan_budgets(self, path3, xy_program3, sampler_config):
        sampler = Sampler(path3, xy_program3, sampler_config)
        assert sampler.n_angles == 100
        growth = lambda_of_phi(math.pi) * (1 + ETA)
        last = sampler.plan[-1]
        assert last.out_a.parent.r == pytest.approx(0.1 * growth**2)
        assert last.out_b.parent.r == pytest.approx(0.1 * growth)


class TestRunShot:
    def test_record(self, path3, adaptive_program3, sampler_config):
        record = run_shot(path3, adaptive_program3, seed=5, config=sampler_config)
        assert [o.qubit for o in record.outcomes] == [0, 1, 2]
        assert record.branch_count == 2
        assert 1 <= record.max_support <= 17
        assert set(record.bits) <= {"0", "1"}
        assert record.as_dict()["bits"] == record.bits

    def test_deterministic(self, path3, adaptive_program3, sampler_config):
        sampler = Sampler(path3, adaptive_program3, sampler_config)
        assert sampler.run_shot(3, 99) == sampler.run_shot(3, 99)

    def test_pole_inputs_stay_put(self, two_pole_graph, sampler_config):
        prog = MeasurementProgram(steps=[MeasurementStep(qubit=0, basis="Z"), MeasurementStep(qubit=1, basis="Z")])
        result = run_batch(two_pole_graph, prog, 200, seed=1, config=sampler_config)
        assert result.distribution == {"00": 1.0}


class TestRunBatch:
    def test_empty_batch(self, path3, xy_program3, sampler_config):
        result = run_batch(path3, xy_program3, 0, seed=1, config=sampler_config)
        assert result.records == []
        assert result.distribution == {}

    def test_single_qubit_born_rule(self, sampler_config):
        g = GraphSpec(nodes=[NodeSpec(id=0, theta=math.pi / 3)])
        prog = MeasurementProgram(steps=[MeasurementStep(qubit=0, basis="Z")])
        result = run_batch(g, prog, 4000, seed=7, config=sampler_config)
        assert result.distribution["0"] == pytest.approx(0.75, abs=0.03)

    def test_thread_count_does_not_change_results(self, path3, adaptive_program3, sampler_config):
        serial = run_batch(path3, adaptive_program3, 50, seed=11, config=sampler_config)
        threaded = run_batch(
            path3, adaptive_program3, 50, seed=11, config=dataclasses.replace(sampler_config, threads=4)
        )
        assert [r.bits for r in serial.records] == [r.bits for r in threaded.records]

    def test_matches_oracle(self, path3, adaptive_program3, sampler_config):
        n_shots = 10_000
        result = run_batch(path3, adaptive_program3, n_shots, seed=2024, config=sampler_config)
        exact = exact_distribution(path3, adaptive_program3)
        assert tv_distance(result.distribution, exact.probabilities) <= tv_bound(3, n_shots, ETA)

    def test_thermal_inputs_match_oracle(self, sampler_config):
        g = GraphSpec(
            nodes=[NodeSpec(id=0, theta=math.asin(0.2), T=0.5), NodeSpec(id=1, theta=math.asin(0.2), T=0.5)],
            edges=[EdgeSpec(a=0, b=1, phi=2.0)],
        )
        prog = xy_chain_program(2)
        result = run_batch(g, prog, 5000, seed=3, config=sampler_config)
        exact = exact_distribution(g, prog)
        assert tv_distance(result.distribution, exact.probabilities) <= tv_bound(2, 5000, ETA)


TV_ACCEPT = 0.02
ACCEPT_SHOTS = 100_000

INSTANCES = {
    "path-3": nx.path_graph(3),
    "path-4": nx.path_graph(4),
    "triangle": nx.cycle_graph(3),
    "star-4": nx.star_graph(4),
    "3-regular-6": nx.random_regular_graph(3, 6, seed=7),
}


def raw_phase_instance() -> GraphSpec:
    """A raw four-phase gate next to a CZ, on inputs off the x axis."""
    theta = math.asin(0.08)
    return GraphSpec(
        nodes=[
            NodeSpec(id=0, theta=theta, azimuth=0.4),
            NodeSpec(id=1, theta=theta, azimuth=-1.2),
            NodeSpec(id=2, theta=theta),
        ],
        edges=[EdgeSpec(a=0, b=1, phis=(0.3, 1.1, -0.4, 2.0)), EdgeSpec(a=1, b=2, phi=math.pi)],
    )


def asymmetric_growth_instance() -> GraphSpec:
    theta = math.asin(0.1)
    return GraphSpec(
        nodes=[NodeSpec(id=i, theta=theta) for i in range(3)],
        edges=[
            EdgeSpec(a=0, b=1, phi=math.pi, growth_a=3.0, growth_b=1.6),
            EdgeSpec(a=1, b=2, phi=math.pi),
        ],
    )


def reordered(g: GraphSpec) -> GraphSpec:
    """Same instance with the edge list reversed and controlled-phase endpoints swapped."""
    edges = [
        EdgeSpec(a=e.b, b=e.a, phi=e.phi) if e.phi is not None and e.growth_a is None else e
        for e in reversed(g.edges)
    ]
    return GraphSpec(nodes=g.nodes, edges=edges)


class TestEdgeOrder:
    def test_reversed_edge_list_gives_same_shots(self, sampler_config):
        g = graph_from_networkx(nx.cycle_graph(3), theta=admissible_theta(nx.cycle_graph(3)), phi=math.pi)
        flipped = GraphSpec(nodes=g.nodes, edges=list(reversed(g.edges)))
        prog = mixed_program(3)
        first = run_batch(g, prog, 200, seed=8, config=sampler_config)
        second = run_batch(flipped, prog, 200, seed=8, config=sampler_config)
        assert [r.bits for r in first.records] == [r.bits for r in second.records]

    def test_oracle_ignores_edge_order(self):
        g = raw_phase_instance()
        prog = mixed_program(3)
        assert exact_distribution(reordered(g), prog).probabilities == pytest.approx(
            exact_distribution(g, prog).probabilities, abs=1e-12
        )


def assert_matches_oracle(g: GraphSpec, prog: MeasurementProgram, config, seed: int = 42):
    result = run_batch(g, prog, ACCEPT_SHOTS, seed=seed, config=config)
    exact = exact_distribution(g, prog)
    assert tv_distance(result.distribution, exact.probabilities) <= TV_ACCEPT


@pytest.mark.slow
@pytest.mark.parametrize("name", list(INSTANCES))
def test_instances_match_oracle(name, sampler_config):
    graph = INSTANCES[name]
    g = graph_from_networkx(graph, theta=admissible_theta(graph), phi=math.pi)
    assert_matches_oracle(g, mixed_program(graph.number_of_nodes()), sampler_config)


@pytest.mark.slow
def test_reordered_instance_matches_oracle(sampler_config):
    graph = INSTANCES["star-4"]
    g = graph_from_networkx(graph, theta=admissible_theta(graph), phi=math.pi)
    assert_matches_oracle(reordered(g), mixed_program(graph.number_of_nodes()), sampler_config)


@pytest.mark.slow
def test_raw_phase_gate_matches_oracle(sampler_config):
    assert_matches_oracle(raw_phase_instance(), mixed_program(3), sampler_config)


@pytest.mark.slow
def test_asymmetric_growth_matches_oracle(sampler_config):
    g = asymmetric_growth_instance()
    assert Sampler(g, mixed_program(3), sampler_config).admission.accepted
    assert_matches_oracle(g, mixed_program(3), sampler_config)


class TestTvDistance:
    def test_disjoint(self):
        assert tv_distance({"0": 1.0}, {"1": 1.0}) == 1.0

    def test_identical(self):
        assert tv_distance({"00": 0.5, "11": 0.5}, {"11": 0.5, "00": 0.5}) == 0.0

    def test_bound_without_shots(self):
        assert tv_bound(3, 0, ETA) == math.inf
