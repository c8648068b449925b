"""Generalized-separable decompositions of two-qubit coefficient matrices."""

import logging
import math
import threading
from dataclasses import dataclass, field

import numpy as np

from decomposer.lp import build_problem, solve_feasibility
from shared.pauli_core import (
    TWO_PI,
    BlochOp,
    PauliCoeffMatrix,
    apply_gate,
    product_matrix,
    rotate_z,
)
from shared.state_spaces import Discretization

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-7
WEIGHT_FLOOR = 1e-14
ZERO_RADIUS = 1e-15
CACHE_QUANTUM = 1e-9


@dataclass(frozen=True, eq=False)
class SepDecomposition:
    """Convex mixture sum_i p_i a_i (x) b_i reconstructing ``target``."""

    weights: np.ndarray
    a_ops: tuple[BlochOp, ...]
    b_ops: tuple[BlochOp, ...]
    target: PauliCoeffMatrix
    residual: float = field(default=-1.0)
    cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if not (len(w) == len(self.a_ops) == len(self.b_ops)) or len(w) == 0:
            raise ValueError("Decomposition needs matching, non-empty weight and factor lists")
        if np.any(w < 0):
            raise ValueError("Decomposition weights must be non-negative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "a_ops", tuple(self.a_ops))
        object.__setattr__(self, "b_ops", tuple(self.b_ops))
        cumulative = np.cumsum(w)
        cumulative.setflags(write=False)
        object.__setattr__(self, "cumulative", cumulative)
        if self.residual < 0:
            object.__setattr__(self, "residual", self.reconstruction_error())

    def __len__(self) -> int:
        return len(self.weights)

    def branches(self) -> list[tuple[float, BlochOp, BlochOp]]:
        return list(zip(self.weights.tolist(), self.a_ops, self.b_ops))

    def reconstruct(self) -> np.ndarray:
        va = np.array([a.vector() for a in self.a_ops])
        vb = np.array([b.vector() for b in self.b_ops])
        return np.einsum("k,ki,kj->ij", self.weights, va, vb)

    def reconstruction_error(self) -> float:
        return float(np.max(np.abs(self.reconstruct() - self.target.coeffs)))

    def weight_error(self) -> float:
        return abs(float(self.weights.sum()) - 1.0)

    def sample(self, rng: np.random.Generator) -> tuple[BlochOp, BlochOp]:
        index = int(np.searchsorted(self.cumulative, rng.random() * self.cumulative[-1], side="right"))
        index = min(index, len(self) - 1)
        return self.a_ops[index], self.b_ops[index]

    def rotated(self, angle_a: float, angle_b: float) -> "SepDecomposition":
        """Same mixture after local Z rotations of the A and B factors."""
        if angle_a == 0.0 and angle_b == 0.0:
            return self
        return SepDecomposition(
            weights=self.weights,
            a_ops=tuple(rotate_z(a, angle_a) for a in self.a_ops),
            b_ops=tuple(rotate_z(b, angle_b) for b in self.b_ops),
            target=rotate_coeffs(self.target, angle_a, angle_b),
        )


@dataclass(frozen=True, eq=False)
class Infeasible:
    """No decomposition within tolerance; ``objective`` is the phase-1 violation."""

    target: PauliCoeffMatrix
    objective: float


def _z_rotation_block(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, 1]], dtype=float)


def rotate_coeffs(m: PauliCoeffMatrix, angle_a: float, angle_b: float) -> PauliCoeffMatrix:
    """Coefficients after rotating the A factor by angle_a and the B factor by angle_b."""
    return PauliCoeffMatrix(_z_rotation_block(angle_a) @ m.coeffs @ _z_rotation_block(angle_b).T)


def _homogeneous(space: Discretization) -> np.ndarray:
    return np.column_stack([np.ones(len(space)), space.points])


def decompose(
    target: PauliCoeffMatrix | np.ndarray,
    space_a: Discretization,
    space_b: Discretization,
    eps: float = DEFAULT_EPS,
) -> SepDecomposition | Infeasible:
    """Decompose ``target`` over products of the extremal points of the two spaces.

    A returned SepDecomposition has been re-verified against the target
    independently of the solver; a failed verification is reported as Infeasible.
    """
    if not isinstance(target, PauliCoeffMatrix):
        target = PauliCoeffMatrix(target)
    va, vb = _homogeneous(space_a), _homogeneous(space_b)
    solution = solve_feasibility(build_problem(target.coeffs, va, vb, eps))
    if not solution.feasible:
        return Infeasible(target=target, objective=solution.objective)

    keep = np.flatnonzero(solution.weights > WEIGHT_FLOOR)
    weights = solution.weights[keep]
    weights = weights / weights.sum()
    n_b = len(vb)
    a_ops = space_a.bloch_ops()
    b_ops = space_b.bloch_ops()
    decomposition = SepDecomposition(
        weights=weights,
        a_ops=tuple(a_ops[k // n_b] for k in keep),
        b_ops=tuple(b_ops[k % n_b] for k in keep),
        target=target,
    )
    if decomposition.residual > eps or decomposition.weight_error() > 1e-9:
        logger.warning(
            f"Solver reported violation {solution.objective:.3e} but the "
            f"reconstruction misses by {decomposition.residual:.3e}"
        )
        return Infeasible(target=target, objective=max(solution.objective, decomposition.residual))
    return decomposition


def _sector_turn(op: BlochOp, space: Discretization) -> float:
    """Rotation, a multiple of the grid step, that brings op into the first sector."""
    if space.kind == "seed" or op.radius <= ZERO_RADIUS:
        return 0.0
    step = TWO_PI / space.n_angles
    return step * math.floor((op.azimuth - space.offset) / step)


def _space_radius(space: Discretization) -> float:
    return space.parent.r if space.parent is not None else space.max_radius


def _quantize(value: float) -> int:
    return round(value / CACHE_QUANTUM)


class DecompositionCache:
    """Thread-safe map from quantized gate instances to decompositions."""

    def __init__(self):
        self._entries: dict[tuple, SepDecomposition | Infeasible] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def get_or_compute(self, key: tuple, compute) -> SepDecomposition | Infeasible:
        with self._lock:
            if key in self._entries:
                self.hits += 1
                return self._entries[key]
            self.misses += 1
        # solved outside the lock; on a concurrent duplicate the first stored result wins
        result = compute()
        with self._lock:
            return self._entries.setdefault(key, result)


def _pole_split(
    pole: BlochOp, other: BlochOp, phi: float, target: PauliCoeffMatrix, pole_is_a: bool
) -> SepDecomposition:
    """z-axis input: its |0><0| part leaves the partner alone, its |1><1| part phases it."""
    up, down = BlochOp(0.0, 0.0, 1.0), BlochOp(0.0, 0.0, -1.0)
    pairs = [((1 + pole.z) / 2, up, other), ((1 - pole.z) / 2, down, rotate_z(other, phi))]
    pairs = [p for p in pairs if p[0] > 0]
    weights = [p[0] for p in pairs]
    poles = tuple(p[1] for p in pairs)
    partners = tuple(p[2] for p in pairs)
    if pole_is_a:
        return SepDecomposition(weights, poles, partners, target)
    return SepDecomposition(weights, partners, poles, target)


def decompose_product(
    a: BlochOp,
    b: BlochOp,
    phi: float,
    out_a: Discretization,
    out_b: Discretization,
    eps: float = DEFAULT_EPS,
    cache: DecompositionCache | None = None,
) -> SepDecomposition | Infeasible:
    """Decompose V_phi (a (x) b) V_phi^dagger against the two output spaces.

    Inputs on the z axis use the closed-form split; everything else is solved in
    the first angular sector of each output grid and rotated back.
    """
    if a.radius <= ZERO_RADIUS:
        return _pole_split(a, b, phi, apply_gate(phi, product_matrix(a, b)), pole_is_a=True)
    if b.radius <= ZERO_RADIUS:
        return _pole_split(b, a, phi, apply_gate(phi, product_matrix(a, b)), pole_is_a=False)

    turn_a, turn_b = _sector_turn(a, out_a), _sector_turn(b, out_b)
    a0, b0 = rotate_z(a, -turn_a), rotate_z(b, -turn_b)

    def solve() -> SepDecomposition | Infeasible:
        return decompose(apply_gate(phi, product_matrix(a0, b0)), out_a, out_b, eps)

    if cache is None:
        result = solve()
    else:
        key = (
            _quantize(a0.radius), _quantize(a0.z), _quantize(a0.azimuth),
            _quantize(b0.radius), _quantize(b0.z), _quantize(b0.azimuth),
            _quantize(phi),
            _quantize(_space_radius(out_a)), out_a.n_angles, _quantize(out_a.offset), out_a.kind,
            _quantize(_space_radius(out_b)), out_b.n_angles, _quantize(out_b.offset), out_b.kind,
        )
        result = cache.get_or_compute(key, solve)
    if isinstance(result, Infeasible):
        return result
    return result.rotated(turn_a, turn_b)
