"""Phase-1 feasibility LP over extremal product pairs.

Variables are the weights of every (a_i, b_j) product plus one slack pair per
Pauli-coefficient row; the objective is the total absolute violation, so a zero
optimum means an exact convex decomposition and a positive one measures how far
the target is from the hull.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

logger = logging.getLogger(__name__)

N_ROWS = 16
SOLVER_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class LPProblem:
    a_eq: np.ndarray
    b_eq: np.ndarray
    eps: float

    @property
    def n_vars(self) -> int:
        return self.a_eq.shape[1]


@dataclass(frozen=True, eq=False)
class LPSolution:
    feasible: bool
    objective: float
    weights: np.ndarray


def build_problem(
    target: np.ndarray, vecs_a: np.ndarray, vecs_b: np.ndarray, eps: float
) -> LPProblem:
    """Column i * len(vecs_b) + j holds the flattened product [1,a_i] [1,b_j]^T."""
    if eps < 0:
        raise ValueError(f"LP slack tolerance must be non-negative, got {eps}")
    n_a, n_b = len(vecs_a), len(vecs_b)
    a_eq = np.einsum("ik,jl->klij", vecs_a, vecs_b).reshape(N_ROWS, n_a * n_b)
    return LPProblem(a_eq=a_eq, b_eq=np.asarray(target, dtype=float).ravel(), eps=eps)


def solve_feasibility(problem: LPProblem) -> LPSolution:
    n = problem.n_vars
    identity = np.eye(N_ROWS)
    a_full = np.hstack([problem.a_eq, identity, -identity])
    cost = np.concatenate([np.zeros(n), np.ones(2 * N_ROWS)])
    res = linprog(
        cost,
        A_eq=a_full,
        b_eq=problem.b_eq,
        bounds=(0, None),
        method="highs-ds",
        options={
            "primal_feasibility_tolerance": SOLVER_TOL,
            "dual_feasibility_tolerance": SOLVER_TOL,
        },
    )
    if res.status != 0:
        # the slack columns make every instance feasible and bounded
        raise RuntimeError(f"LP solver failed: {res.message}")
    objective = max(0.0, float(res.fun))
    weights = np.clip(res.x[:n], 0.0, None)
    logger.debug(f"LP with {n} products: violation {objective:.3e}")
    return LPSolution(
        feasible=objective <= problem.eps, objective=objective, weights=weights
    )
