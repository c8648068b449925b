"""Quantum-separability cross-check of the cylinder criterion."""

import cmath

import numpy as np

from shared.pauli_core import I2, X

PSD_TOL = 1e-10


def gated_coherence(f_a: float, f_b: float, phi: float) -> tuple[float, float]:
    """(c, gamma) with c e^{i gamma} = f_a f_b (e^{i phi} - 1)."""
    c, gamma = cmath.polar(f_a * f_b * (cmath.exp(1j * phi) - 1.0))
    return c, gamma


def gated_extremal_operator(f_a: float, f_b: float, phi: float, normalized: bool = True) -> np.ndarray:
    """(I + f_a X)(x)(I + f_b X) plus the |00><11| coherence the gate adds, unit trace by default."""
    if f_a <= 0 or f_b <= 0:
        raise ValueError(f"Shrink ratios must be positive, got {f_a}, {f_b}")
    op = np.kron(I2 + f_a * X, I2 + f_b * X)
    coherence = f_a * f_b * (cmath.exp(-1j * phi) - 1.0)
    op[0, 3] += coherence
    op[3, 0] += coherence.conjugate()
    return op / 4.0 if normalized else op


def partial_transpose(rho: np.ndarray, sys: int = 1) -> np.ndarray:
    """Partial transpose of a two-qubit operator on subsystem ``sys`` (0 = A, 1 = B)."""
    t = np.asarray(rho).reshape(2, 2, 2, 2)
    if sys == 0:
        t = t.transpose(2, 1, 0, 3)
    elif sys == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"sys must be 0 or 1, got {sys}")
    return t.reshape(4, 4)


def min_eigenvalue(op: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(op)[0])


def ppt_separability_check(f_a: float, f_b: float, phi: float, tol: float = PSD_TOL) -> bool:
    """PPT verdict on the gated cylinder-extremal operator; exact for two qubits."""
    return min_eigenvalue(partial_transpose(gated_extremal_operator(f_a, f_b, phi))) >= -tol
