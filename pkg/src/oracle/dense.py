"""Dense state-vector / density-matrix oracle for small instances."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from shared.config import OracleConfig
from shared.errors import GraphSpecError, OracleCapError
from shared.graph_spec import GraphSpec, MeasurementProgram, MeasurementStep
from shared.pauli_core import I2, X, Y, Z, BlochOp

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10
PHYSICAL_TOL = 1e-9
BRANCH_FLOOR = 1e-15


def pure_vector(op: BlochOp) -> np.ndarray:
    """cos(theta/2)|0> + e^{i azimuth} sin(theta/2)|1> for a unit Bloch vector."""
    theta = math.acos(max(-1.0, min(1.0, op.z)))
    return np.array([math.cos(theta / 2), np.exp(1j * op.azimuth) * math.sin(theta / 2)])


def _bloch_norm(op: BlochOp) -> float:
    return math.sqrt(op.x**2 + op.y**2 + op.z**2)


@dataclass
class DenseState:
    """Either an amplitude vector or a density matrix over ``qubits`` (first = most significant)."""

    qubits: list[int]
    data: np.ndarray

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    def position(self, qubit: int) -> int:
        return self.qubits.index(qubit)

    def norm(self) -> float:
        if self.is_pure:
            return float(np.vdot(self.data, self.data).real)
        return float(np.trace(self.data).real)

    @classmethod
    def from_graph(cls, g: GraphSpec, config: OracleConfig | None = None) -> "DenseState":
        config = config or OracleConfig()
        qubits = sorted(g.node_ids)
        ops = [g.node(q).input_op() for q in qubits]
        for q, op in zip(qubits, ops):
            if _bloch_norm(op) > 1.0 + PHYSICAL_TOL:
                raise GraphSpecError(f"Node {q}: the oracle needs a physical input state")
        pure = all(g.node(q).is_pure for q in qubits)
        cap = config.max_pure_qubits if pure else config.max_mixed_qubits
        if len(qubits) > cap:
            kind = "pure" if pure else "mixed"
            raise OracleCapError(f"{len(qubits)} qubits exceed the {kind}-state oracle cap of {cap}")
        data = np.ones(1, dtype=complex) if pure else np.ones((1, 1), dtype=complex)
        for op in ops:
            data = np.kron(data, pure_vector(op) if pure else op.matrix())
        return cls(qubits, data)

    def apply_diagonal(self, diag: np.ndarray) -> None:
        if self.is_pure:
            self.data = diag * self.data
        else:
            self.data = diag[:, None] * self.data * diag.conj()[None, :]

    def apply_local(self, matrix: np.ndarray, qubit: int) -> "DenseState":
        """New state with ``matrix`` applied to ``qubit`` (on both sides for density matrices)."""
        n, k = self.n_qubits, self.position(qubit)
        left, right = 2**k, 2 ** (n - k - 1)
        if self.is_pure:
            psi = self.data.reshape(left, 2, right)
            return DenseState(self.qubits, np.einsum("ij,ajb->aib", matrix, psi).reshape(-1))
        rho = self.data.reshape(left, 2, right, left, 2, right)
        rho = np.einsum("ij,ajbcld,lk->aibckd", matrix, rho, matrix.conj().T)
        return DenseState(self.qubits, rho.reshape(2**n, 2**n))


def gate_diagonal(g: GraphSpec, qubits: list[int]) -> np.ndarray:
    """Diagonal of the product of every edge's gate, in the computational basis."""
    n = len(qubits)
    index = np.arange(2**n)
    bit = {q: (index >> (n - 1 - i)) & 1 for i, q in enumerate(qubits)}
    phase = np.zeros(2**n)
    for edge in g.edges:
        phases = np.array(edge.gate().phases)
        phase += phases[2 * bit[edge.a] + bit[edge.b]]
    return np.exp(1j * phase)


def projector(step: MeasurementStep, angle: float, bit: int) -> np.ndarray:
    sign = 1.0 if bit == 0 else -1.0
    if step.basis == "Z":
        return 0.5 * (I2 + sign * Z)
    return 0.5 * (I2 + sign * (math.cos(angle) * X + math.sin(angle) * Y))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Outcome bitstrings, ordered by program step, mapped to their probabilities."""

    probabilities: dict[str, float]
    measured: tuple[int, ...]

    def __post_init__(self):
        total = sum(self.probabilities.values())
        if abs(total - 1.0) > 1e-9:
            raise ArithmeticError(f"Outcome probabilities sum to {total}")

    @property
    def support_size(self) -> int:
        return sum(1 for p in self.probabilities.values() if p > 0)

    def marginal(self, steps: list[int]) -> dict[str, float]:
        out: dict[str, float] = {}
        for bits, p in self.probabilities.items():
            key = "".join(bits[i] for i in steps)
            out[key] = out.get(key, 0.0) + p
        return out


def exact_distribution(
    g: GraphSpec, prog: MeasurementProgram, config: OracleConfig | None = None
) -> OutcomeDistribution:
    """Apply every gate exactly, then enumerate the adaptive measurement tree."""
    prog.check_against(g)
    state = DenseState.from_graph(g, config)
    state.apply_diagonal(gate_diagonal(g, state.qubits))
    if abs(state.norm() - 1.0) > NORM_TOL:
        raise ArithmeticError(f"Prepared state has norm {state.norm()}")

    probabilities: dict[str, float] = {}

    def walk(current: DenseState, bits: list[int]) -> None:
        depth = len(bits)
        if depth == len(prog.steps):
            probabilities["".join(map(str, bits))] = current.norm()
            return
        step = prog.steps[depth]
        angle = step.angle_given(bits) if step.basis == "XY" else 0.0
        for bit in (0, 1):
            branch = current.apply_local(projector(step, angle, bit), step.qubit)
            if branch.norm() > BRANCH_FLOOR:
                walk(branch, bits + [bit])

    walk(state, [])
    logger.debug(f"Oracle enumerated {len(probabilities)} outcome branches")
    return OutcomeDistribution(probabilities, tuple(prog.measured_qubits))
