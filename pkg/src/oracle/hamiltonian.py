"""Parent Hamiltonian of a uniform diagonal-gate graph state, built two ways."""

import logging
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from oracle.dense import gate_diagonal
from shared.config import OracleConfig
from shared.errors import NonUniformInstanceError, OracleCapError
from shared.graph_spec import GraphSpec
from shared.pauli_core import I2, X, Z

logger = logging.getLogger(__name__)

MATCH_TOL = 1e-9
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|


@dataclass(frozen=True)
class HamiltonianReport:
    n_qubits: int
    theta: float
    phi: float
    identity_shift: float
    max_difference: float
    ground_energy: float
    fidelity: float

    @property
    def forms_agree(self) -> bool:
        return self.max_difference <= MATCH_TOL

    @property
    def zero_ground_energy(self) -> bool:
        return abs(self.ground_energy) <= MATCH_TOL

    @property
    def ground_state_matches(self) -> bool:
        return self.fidelity >= 1.0 - MATCH_TOL

    @property
    def passed(self) -> bool:
        return self.forms_agree and self.zero_ground_energy and self.ground_state_matches

    def as_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "theta": self.theta,
            "phi": self.phi,
            "identity_shift": self.identity_shift,
            "max_difference": self.max_difference,
            "ground_energy": self.ground_energy,
            "fidelity": self.fidelity,
            "pass": self.passed,
        }


def _embed(ops: dict[int, np.ndarray], n: int) -> np.ndarray:
    return reduce(np.kron, [ops.get(k, I2) for k in range(n)])


def _phase_string(positions: list[int], phi: float) -> dict[int, np.ndarray]:
    """U(phi) = (x) diag(1, e^{i phi}) over the given positions; a repeated neighbour repeats the factor."""
    factors: dict[int, np.ndarray] = {}
    for k in positions:
        factors[k] = factors.get(k, I2) @ np.diag([1.0, np.exp(1j * phi)])
    return factors


def uniform_parameters(g: GraphSpec, theta: float | None) -> tuple[float, float]:
    for e in g.edges:
        canonical = e.canonical()
        if canonical.gamma_a != 0.0 or canonical.gamma_b != 0.0:
            raise NonUniformInstanceError(f"Edge ({e.a},{e.b}) carries local phases")
    if not g.is_uniform_phase():
        raise NonUniformInstanceError("Edges do not share a common phase")
    phi = g.edges[0].canonical().phi if g.edges else 0.0
    if theta is None:
        thetas = {n.theta for n in g.nodes}
        if None in thetas or len(thetas) != 1:
            raise NonUniformInstanceError("Nodes do not share a common polar angle")
        theta = thetas.pop()
    return theta, phi


def hamiltonian_check(
    g: GraphSpec, theta: float | None = None, config: OracleConfig | None = None
) -> HamiltonianReport:
    """Compare V (sum_n A_n) V^dagger with the explicit neighbour form and check its ground state."""
    config = config or OracleConfig()
    qubits = sorted(g.node_ids)
    n = len(qubits)
    if n > config.max_mixed_qubits:
        raise OracleCapError(f"{n} qubits exceed the Hamiltonian cap of {config.max_mixed_qubits}")
    theta, phi = uniform_parameters(g, theta)
    pos = {q: i for i, q in enumerate(qubits)}
    s, c = math.sin(theta), math.cos(theta)

    v = gate_diagonal(g, qubits)
    projectors = sum(_embed({pos[q]: 0.5 * (I2 - s * X - c * Z)}, n) for q in qubits)
    h_conjugated = v[:, None] * projectors * v.conj()[None, :]

    graph = g.to_networkx()
    h_explicit = np.zeros((2**n, 2**n), dtype=complex)
    for q in qubits:
        neighbours = [pos[m] for _, m in graph.edges(q)]
        hop = _embed({pos[q]: SIGMA_PLUS, **_phase_string(neighbours, -phi)}, n)
        h_explicit -= 0.5 * (s * (hop + hop.conj().T) + c * _embed({pos[q]: Z}, n))

    shift = float(np.trace(h_conjugated - h_explicit).real) / 2**n
    difference = float(np.max(np.abs(h_conjugated - h_explicit - shift * np.eye(2**n))))

    energies, vectors = np.linalg.eigh(h_conjugated)
    product = reduce(np.kron, [np.array([math.cos(theta / 2), math.sin(theta / 2)])] * n)
    expected = v * product
    fidelity = float(abs(np.vdot(vectors[:, 0], expected)) ** 2)
    report = HamiltonianReport(n, theta, phi, shift, difference, float(energies[0]), fidelity)
    logger.info(
        f"Hamiltonian check on {n} qubits: shift {shift:.6g}, "
        f"difference {difference:.2e}, fidelity {fidelity:.12f}"
    )
    return report
