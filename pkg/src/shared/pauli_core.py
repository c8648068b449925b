"""One- and two-qubit normalized operators in Bloch and Pauli-coefficient form.

Conventions:
  single qubit   [x, y, z]  <->  (I + xX + yY + zZ) / 2
  two qubits     rho_ij     <->  (1/4) sum_ij rho_ij  sigma_i (x) sigma_j,
                 indices 0..3 over (I, X, Y, Z), rho_00 = 1.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from shared.errors import MalformedTargetError

TWO_PI = 2.0 * math.pi
Z_TOL = 1e-12
NORM_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)

# PAULI_PAIRS[i, j] = sigma_i (x) sigma_j
PAULI_PAIRS = np.array([[np.kron(a, b) for b in PAULIS] for a in PAULIS])


def reduce_angle(angle: float) -> float:
    """Reduce an angle to [0, 2pi)."""
    reduced = math.fmod(angle, TWO_PI)
    if reduced < 0:
        reduced += TWO_PI
    # fmod can hand back 2pi itself after the shift
    return 0.0 if reduced >= TWO_PI else reduced


@dataclass(frozen=True)
class BlochOp:
    """Normalized single-qubit operator; the radius may exceed 1, |z| may not."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"Bloch component {name} is not finite: {value}")
            object.__setattr__(self, name, float(value))
        if abs(self.z) > 1.0 + Z_TOL:
            raise ValueError(f"|z| must not exceed 1, got z={self.z}")
        if abs(self.z) > 1.0:
            object.__setattr__(self, "z", math.copysign(1.0, self.z))

    @classmethod
    def from_angles(
        cls, theta: float, azimuth: float = 0.0, shrink: float = 1.0
    ) -> "BlochOp":
        """Pure state at polar angle theta, optionally shrunk toward the origin."""
        s = math.sin(theta) * shrink
        return cls(s * math.cos(azimuth), s * math.sin(azimuth), math.cos(theta) * shrink)

    @property
    def radius(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def azimuth(self) -> float:
        if self.x == 0.0 and self.y == 0.0:
            return 0.0
        return reduce_angle(math.atan2(self.y, self.x))

    def vector(self) -> np.ndarray:
        """The 4-vector [1, x, y, z]."""
        return np.array([1.0, self.x, self.y, self.z])

    def matrix(self) -> np.ndarray:
        return 0.5 * (I2 + self.x * X + self.y * Y + self.z * Z)

    def rotated(self, angle: float) -> "BlochOp":
        return rotate_z(self, angle)

    def scaled_xy(self, factor: float) -> "BlochOp":
        return BlochOp(self.x * factor, self.y * factor, self.z)


def rotate_z(op: BlochOp, angle: float) -> BlochOp:
    """Conjugate by diag(1, e^{i angle}): rotates (x, y) by +angle, z fixed."""
    c, s = math.cos(angle), math.sin(angle)
    return BlochOp(c * op.x - s * op.y, s * op.x + c * op.y, op.z)


@dataclass(frozen=True, eq=False)
class PauliCoeffMatrix:
    """4x4 real Pauli coefficient matrix of a normalized two-qubit operator."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=float)
        if arr.shape != (4, 4):
            raise MalformedTargetError(f"Expected a 4x4 matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise MalformedTargetError("Coefficient matrix has non-finite entries")
        if abs(arr[0, 0] - 1.0) > NORM_TOL:
            raise MalformedTargetError(f"rho_00 must be 1, got {arr[0, 0]}")
        arr[0, 0] = 1.0
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_operator(cls, op: np.ndarray) -> "PauliCoeffMatrix":
        """Pauli coefficients of a unit-trace 4x4 Hermitian matrix."""
        coeffs = np.einsum("ijab,ba->ij", PAULI_PAIRS, np.asarray(op, dtype=complex))
        return cls(coeffs.real)

    def to_operator(self) -> np.ndarray:
        return 0.25 * np.einsum("ij,ijab->ab", self.coeffs, PAULI_PAIRS)

    def allclose(self, other: "PauliCoeffMatrix", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0.0, atol=atol))

    def max_abs_diff(self, other: "PauliCoeffMatrix") -> float:
        return float(np.max(np.abs(self.coeffs - other.coeffs)))


def product_matrix(a: BlochOp, b: BlochOp) -> PauliCoeffMatrix:
    """Coefficients of the product operator a (x) b: the outer product [1,a] [1,b]^T."""
    return PauliCoeffMatrix(np.outer(a.vector(), b.vector()))


@dataclass(frozen=True)
class DiagonalGate:
    """Two-qubit diagonal unitary diag(e^{i phi1}, ..., e^{i phi4}) on |00>,|01>,|10>,|11>."""

    phases: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.phases) != 4:
            raise ValueError(f"A diagonal gate needs 4 phases, got {len(self.phases)}")
        if not all(math.isfinite(p) for p in self.phases):
            raise ValueError(f"Gate phases must be finite: {self.phases}")
        object.__setattr__(self, "phases", tuple(reduce_angle(p) for p in self.phases))

    @classmethod
    def controlled_phase(cls, phi: float) -> "DiagonalGate":
        """The canonical V_phi = diag(1, 1, 1, e^{i phi})."""
        return cls((0.0, 0.0, 0.0, phi))

    @property
    def phi(self) -> float:
        p1, p2, p3, p4 = self.phases
        return reduce_angle(p4 + p1 - p2 - p3)

    def unitary(self) -> np.ndarray:
        return np.diag(np.exp(1j * np.array(self.phases)))


class CanonicalGate(NamedTuple):
    """phi of V_phi plus the local phases gamma_a = phi3 - phi1, gamma_b = phi2 - phi1.

    (diag(1, e^{-i gamma_a}) (x) diag(1, e^{-i gamma_b})) . gate = e^{i phi1} V_phi
    """

    phi: float
    gamma_a: float
    gamma_b: float

    def local_unitaries(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.diag([1.0, np.exp(-1j * self.gamma_a)]),
            np.diag([1.0, np.exp(-1j * self.gamma_b)]),
        )


def canonicalize_gate(gate: DiagonalGate) -> CanonicalGate:
    p1, p2, p3, _ = gate.phases
    return CanonicalGate(
        phi=gate.phi,
        gamma_a=reduce_angle(p3 - p1),
        gamma_b=reduce_angle(p2 - p1),
    )


def controlled_phase_unitary(phi: float) -> np.ndarray:
    return np.diag([1.0, 1.0, 1.0, np.exp(1j * phi)])


def apply_gate(phi: float, m: PauliCoeffMatrix) -> PauliCoeffMatrix:
    """Coefficients of V_phi M V_phi^dagger, by exact conjugation in the computational basis."""
    v = controlled_phase_unitary(phi)
    return PauliCoeffMatrix.from_operator(v @ m.to_operator() @ v.conj().T)
