"""Bisection searches over output and input radii."""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from decomposer.decompose import DEFAULT_EPS, Infeasible, ZERO_RADIUS, decompose
from shared.errors import NoFeasibleRadiusError
from shared.growth_law import lambda_of_phi, min_cylinder_radius
from shared.pauli_core import TWO_PI, BlochOp, apply_gate, product_matrix, rotate_z
from shared.state_spaces import (
    Discretization,
    dedupe,
    cylinder_extremals,
    spindle_extremals,
    symmetrize,
)

logger = logging.getLogger(__name__)

DEFAULT_ANGLES = 40
RADIUS_PRECISION = 1e-5
R_PRECISION = 1e-4
POLE_TOL = 1e-12
GROWTH_PRECISION = 1e-4
GROWTH_BRACKET = (1.0, 8.0)
RSTAR_MODES = ("phased", "cylinder")
FAMILIES = ("cylinder", "spindle")


def _representatives(space: Discretization, n_angles: int) -> list[BlochOp]:
    """Input points up to rotations that leave an n_angles output grid invariant."""
    step = TWO_PI / n_angles
    reduced = []
    for op in space.bloch_ops():
        if op.radius > ZERO_RADIUS:
            op = rotate_z(op, -step * math.floor(op.azimuth / step))
        reduced.append([op.x, op.y, op.z])
    return [BlochOp(*p) for p in dedupe(np.array(reduced), tol=1e-10)]


def _pole_pair_feasible(
    pole: BlochOp, other: BlochOp, phi: float, out: Discretization
) -> bool:
    """A z-axis input splits in closed form; only the partner's images must fit."""
    partners = []
    if pole.z < 1.0:
        partners.append(rotate_z(other, phi))
    if pole.z > -1.0:
        partners.append(other)
    return all(out.polygon_contains(p, tol=1e-12) for p in partners)


def _smallest_feasible(feasible, bracket: tuple[float, float], precision: float, what: str) -> float:
    """Bisect a monotone feasibility predicate down to its threshold."""
    lo, hi = bracket
    if not feasible(hi):
        raise NoFeasibleRadiusError(f"No feasible {what} in [{lo}, {hi}]")
    if feasible(lo):
        return lo
    step = 0
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        ok = feasible(mid)
        logger.debug(f"Bisection step {step}: {what}={mid:.6g} {'feasible' if ok else 'infeasible'}")
        if ok:
            hi = mid
        else:
            lo = mid
        step += 1
    return hi


def is_feasible_radius(
    space_a: Discretization,
    space_b: Discretization,
    phi: float,
    R: float,
    n_angles: int = DEFAULT_ANGLES,
    eps: float = DEFAULT_EPS,
) -> bool:
    """Whether every gated extremal product decomposes over Cyl(R) x Cyl(R)."""
    out = cylinder_extremals(R, n_angles)
    for a in _representatives(space_a, n_angles):
        for b in _representatives(space_b, n_angles):
            if a.radius <= ZERO_RADIUS:
                ok = _pole_pair_feasible(a, b, phi, out)
            elif b.radius <= ZERO_RADIUS:
                ok = _pole_pair_feasible(b, a, phi, out)
            else:
                target = apply_gate(phi, product_matrix(a, b))
                ok = not isinstance(decompose(target, out, out, eps), Infeasible)
            if not ok:
                return False
    return True


def min_output_radius(
    space_a: Discretization,
    space_b: Discretization,
    phi: float,
    bracket: tuple[float, float] | None = None,
    n_angles: int = DEFAULT_ANGLES,
    eps: float = DEFAULT_EPS,
    precision: float = RADIUS_PRECISION,
) -> float:
    """Smallest common output cylinder radius, by bisection to ``precision``."""
    r_in = max(space_a.max_radius, space_b.max_radius)
    if r_in <= ZERO_RADIUS:
        return 0.0
    if bracket is None:
        bracket = (0.0, 3.0 * r_in / math.cos(math.pi / n_angles))
    return _smallest_feasible(
        lambda R: is_feasible_radius(space_a, space_b, phi, R, n_angles, eps),
        bracket,
        precision,
        "output radius",
    )


def is_feasible_growth(
    space_a: Discretization,
    space_b: Discretization,
    phi: float,
    factor: float,
    eps: float = DEFAULT_EPS,
) -> bool:
    """Whether every gated extremal product decomposes over T_factor(S_A) x T_factor(S_B)."""
    out_a, out_b = space_a.phased(factor), space_b.phased(factor)
    for a in space_a.bloch_ops():
        for b in space_b.bloch_ops():
            target = apply_gate(phi, product_matrix(a, b))
            if isinstance(decompose(target, out_a, out_b, eps), Infeasible):
                return False
    return True


def min_growth_factor(
    space_a: Discretization,
    space_b: Discretization,
    phi: float,
    bracket: tuple[float, float] = GROWTH_BRACKET,
    eps: float = DEFAULT_EPS,
    precision: float = GROWTH_PRECISION,
) -> float:
    """Smallest phasing factor R with the gated spaces inside Conv(T_R(S_A) x T_R(S_B))."""
    return _smallest_feasible(
        lambda factor: is_feasible_growth(space_a, space_b, phi, factor, eps),
        bracket,
        precision,
        "growth factor",
    )


def family_space(family: str, r: float, n_angles: int = DEFAULT_ANGLES) -> Discretization:
    match family:
        case "cylinder":
            return cylinder_extremals(r, n_angles)
        case "spindle":
            return spindle_extremals(r, math.sqrt(max(0.0, 1.0 - r * r)), n_angles)
        case _:
            raise ValueError(f"Unknown state space family: {family!r}")


@dataclass
class ExploreResult:
    family: str
    phi: float
    D: int
    n_angles: int
    eta: float
    r_max: float
    bisection_trace: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "phi": self.phi,
            "D": self.D,
            "n_angles": self.n_angles,
            "eta": self.eta,
            "r_max": self.r_max,
            "bisection_trace": self.bisection_trace,
        }


def max_simulatable_r(
    family: str,
    phi: float,
    D: int,
    n_angles: int = DEFAULT_ANGLES,
    eta: float = 0.0,
    eps: float = DEFAULT_EPS,
    precision: float = R_PRECISION,
    bracket: tuple[float, float] = (1e-3, 1.0),
    use_lp: bool = False,
) -> ExploreResult:
    """Largest input radius whose first gate lands inside the D-1 remaining growth steps.

    The cylinder family has the closed form (lambda (1 + eta))^-D unless
    ``use_lp`` asks for the numerical route.
    """
    if D < 1:
        raise ValueError(f"D must be a positive integer, got {D}")
    if family not in FAMILIES:
        raise ValueError(f"Unknown state space family: {family!r}")
    growth = lambda_of_phi(phi) * (1.0 + eta)
    result = ExploreResult(family, phi, D, n_angles, eta, r_max=0.0)
    if family == "cylinder" and not use_lp:
        result.r_max = min(1.0, growth ** (-D))
        return result

    r_limit = growth ** (-(D - 1))

    def feasible(r: float) -> bool:
        space = family_space(family, r, n_angles)
        ok = is_feasible_radius(space, space, phi, r_limit, n_angles, eps)
        result.bisection_trace.append({"r": r, "feasible": ok})
        logger.info(f"Explore {family} r={r:.6g}: {'feasible' if ok else 'infeasible'}")
        return ok

    lo, hi = bracket
    if not feasible(lo):
        raise NoFeasibleRadiusError(f"Lower end r={lo} of the bracket is already infeasible")
    if feasible(hi):
        result.r_max = hi
        return result
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    result.r_max = lo
    return result


@dataclass(frozen=True)
class RStarReport:
    """R* of the original and alternative pairs, in the units of ``mode``.

    In ``phased`` mode R* is a phasing factor; in ``cylinder`` mode it is an
    absolute output cylinder radius.
    """

    original: float
    alternative: float
    cylinder_bound: float
    tolerance: float
    mode: str = "phased"

    @property
    def symmetrization_helps(self) -> bool:
        return self.alternative <= self.original + self.tolerance

    @property
    def bound_holds(self) -> bool:
        return self.original >= self.cylinder_bound - self.tolerance

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "original": self.original,
            "alternative": self.alternative,
            "cylinder_bound": self.cylinder_bound,
            "tolerance": self.tolerance,
            "symmetrization_helps": self.symmetrization_helps,
            "bound_holds": self.bound_holds,
        }


def _pole_circle_radius(space: Discretization) -> float:
    on_poles = [math.hypot(x, y) for x, y, z in space.points if abs(abs(z) - 1.0) <= POLE_TOL]
    return max(on_poles, default=0.0)


def rstar_compare(
    space_a: Discretization,
    space_b: Discretization,
    phi: float,
    space_a_alt: Discretization | None = None,
    n_angles: int = DEFAULT_ANGLES,
    eps: float = DEFAULT_EPS,
    precision: float | None = None,
    tolerance: float = 1e-4,
    mode: str = "phased",
    bracket: tuple[float, float] | None = None,
) -> RStarReport:
    """Compare R* for (S_A, S_B) against (S_A', S_B), S_A' defaulting to the symmetrized S_A.

    ``phased`` mode grows the spaces themselves, so a larger S_A' also enlarges
    the output hull. ``cylinder`` mode measures both pairs against common
    Cyl(R) x Cyl(R) outputs, which no z rotation of S_A can change.

    The reported cylinder bound is what the points on the z = +-1 planes force:
    lambda(phi) as a factor when both spaces have such a point off the axis, or
    the matching cylinder radius in ``cylinder`` mode.
    """
    if mode not in RSTAR_MODES:
        raise ValueError(f"Unknown R* mode: {mode!r}")
    if space_a_alt is None:
        space_a_alt = symmetrize(space_a, n_angles)
    r_a, r_b = _pole_circle_radius(space_a), _pole_circle_radius(space_b)
    if mode == "phased":
        kwargs = {"eps": eps, "precision": precision or GROWTH_PRECISION, "bracket": bracket or GROWTH_BRACKET}
        original = min_growth_factor(space_a, space_b, phi, **kwargs)
        alternative = min_growth_factor(space_a_alt, space_b, phi, **kwargs)
        bound = lambda_of_phi(phi) if r_a > ZERO_RADIUS and r_b > ZERO_RADIUS else 0.0
    else:
        kwargs = {"n_angles": n_angles, "eps": eps, "precision": precision or RADIUS_PRECISION, "bracket": bracket}
        original = min_output_radius(space_a, space_b, phi, **kwargs)
        alternative = min_output_radius(space_a_alt, space_b, phi, **kwargs)
        bound = min_cylinder_radius(r_a, r_b, phi)
    logger.info(f"R* ({mode}) original={original:.6g} alternative={alternative:.6g} cylinder bound={bound:.6g}")
    return RStarReport(original, alternative, bound, tolerance, mode)
