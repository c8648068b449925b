"""Tests for the dense state-vector oracle."""

import math

import numpy as np
import pytest

from oracle.dense import DenseState, exact_distribution, gate_diagonal, pure_vector
from shared.config import OracleConfig
from shared.errors import GraphSpecError, OracleCapError, ProgramError
from shared.graph_spec import EdgeSpec, GraphSpec, MeasurementProgram, MeasurementStep, NodeSpec
from shared.pauli_core import BlochOp


class TestPureVector:
    def test_plus_state(self):
        vec = pure_vector(BlochOp(1.0, 0.0, 0.0))
        assert np.allclose(vec, [1 / math.sqrt(2), 1 / math.sqrt(2)])

    def test_matches_density_matrix(self):
        op = BlochOp.from_angles(0.7, 1.9)
        vec = pure_vector(op)
        assert np.allclose(np.outer(vec, vec.conj()), op.matrix())


class TestDenseState:
    def test_pure_graph(self, path3):
        state = DenseState.from_graph(path3)
        assert state.is_pure
        assert state.data.shape == (8,)
        assert state.norm() == pytest.approx(1.0)

    def test_thermal_graph_uses_density_matrix(self):
        g = GraphSpec(nodes=[NodeSpec(id=0, theta=0.4, T=1.0), NodeSpec(id=1, theta=0.4)])
        state = DenseState.from_graph(g)
        assert not state.is_pure
        assert state.data.shape == (4, 4)
        assert state.norm() == pytest.approx(1.0)

    def test_pure_cap(self, path3):
        with pytest.raises(OracleCapError):
            DenseState.from_graph(path3, OracleConfig(max_pure_qubits=2, max_mixed_qubits=2))

    def test_unphysical_input(self):
        g = GraphSpec(nodes=[NodeSpec(id=0, bloch=(0.9, 0.0, 0.9))])
        with pytest.raises(GraphSpecError):
            DenseState.from_graph(g)

    def test_gate_diagonal_controlled_phase(self):
        g = GraphSpec(
            nodes=[NodeSpec(id=0, theta=0.1), NodeSpec(id=1, theta=0.1)],
            edges=[EdgeSpec(a=0, b=1, phi=math.pi)],
        )
        assert np.allclose(gate_diagonal(g, [0, 1]), [1, 1, 1, -1])


class TestExactDistribution:
    def test_single_qubit(self):
        g = GraphSpec(nodes=[NodeSpec(id=0, theta=math.pi / 3)])
        prog = MeasurementProgram(steps=[MeasurementStep(qubit=0, basis="Z")])
        dist = exact_distribution(g, prog)
        assert dist.probabilities["0"] == pytest.approx(0.75)
        assert dist.probabilities["1"] == pytest.approx(0.25)

    def test_rejects_consumed_qubit(self, path3):
        prog = MeasurementProgram(steps=[MeasurementStep(qubit=0, basis="Z"), MeasurementStep(qubit=0, basis="Z")])
        with pytest.raises(ProgramError):
            exact_distribution(path3, prog)

    def test_normalized(self, path3, adaptive_program3):
        dist = exact_distribution(path3, adaptive_program3)
        assert sum(dist.probabilities.values()) == pytest.approx(1.0)
        assert dist.measured == (0, 1, 2)

    def test_bell_pair_correlations(self):
        g = GraphSpec(
            nodes=[NodeSpec(id=0, theta=math.pi / 2), NodeSpec(id=1, theta=math.pi / 2)],
            edges=[EdgeSpec(a=0, b=1, phi=math.pi)],
        )
        prog = MeasurementProgram(
            steps=[MeasurementStep(qubit=0, basis="Z"), MeasurementStep(qubit=1, basis="XY")]
        )
        dist = exact_distribution(g, prog)
        assert dist.probabilities == pytest.approx({"00": 0.5, "11": 0.5})
        assert dist.support_size == 2
        assert dist.marginal([1]) == pytest.approx({"0": 0.5, "1": 0.5})

    def test_mixed_input_is_a_mixture(self):
        prog = MeasurementProgram(
            steps=[MeasurementStep(qubit=1, basis="XY", angle=0.4), MeasurementStep(qubit=0, basis="XY")]
        )

        def instance(node0: NodeSpec) -> GraphSpec:
            return GraphSpec(
                nodes=[node0, NodeSpec(id=1, theta=math.pi / 2)],
                edges=[EdgeSpec(a=0, b=1, phi=1.3)],
            )

        mixed = exact_distribution(instance(NodeSpec(id=0, bloch=(0.0, 0.0, 0.2))), prog)
        up = exact_distribution(instance(NodeSpec(id=0, theta=0.0)), prog)
        down = exact_distribution(instance(NodeSpec(id=0, theta=math.pi)), prog)
        for bits, p in mixed.probabilities.items():
            expected = 0.6 * up.probabilities.get(bits, 0.0) + 0.4 * down.probabilities.get(bits, 0.0)
            assert p == pytest.approx(expected, abs=1e-12)
