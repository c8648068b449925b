"""Axially symmetric single-qubit state spaces and their extremal-point discretizations."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from shared.errors import MarginTooSmallError
from shared.pauli_core import TWO_PI, BlochOp, reduce_angle

DEDUP_TOL = 1e-12
MEMBERSHIP_TOL = 1e-9
MIN_SAMPLER_ANGLES = 8


@dataclass(frozen=True)
class Cylinder:
    r: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"Cylinder radius must be non-negative, got {self.r}")

    def contains(self, op: BlochOp, tol: float = MEMBERSHIP_TOL) -> bool:
        return op.radius <= self.r + tol and abs(op.z) <= 1.0 + tol

    def describe(self) -> dict:
        return {"kind": "cylinder", "r": self.r}


@dataclass(frozen=True)
class Spindle:
    """B(r, h): hull of the radius-r discs at z = +-h and the poles [0, 0, +-1]."""

    r: float
    h: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"Spindle radius must be non-negative, got {self.r}")
        if not 0.0 <= self.h <= 1.0:
            raise ValueError(f"Spindle height must lie in [0, 1], got {self.h}")

    @classmethod
    def for_pure_radius(cls, r: float) -> "Spindle":
        """B(r, sqrt(1 - r^2)), the smallest spindle holding the pure states of radius r."""
        return cls(r, math.sqrt(max(0.0, 1.0 - r * r)))

    def radius_at(self, z: float) -> float:
        az = abs(z)
        if az > 1.0:
            return -1.0
        if az <= self.h:
            return self.r
        return self.r * (1.0 - az) / (1.0 - self.h)

    def contains(self, op: BlochOp, tol: float = MEMBERSHIP_TOL) -> bool:
        return abs(op.z) <= 1.0 + tol and op.radius <= self.radius_at(op.z) + tol

    def describe(self) -> dict:
        return {"kind": "spindle", "r": self.r, "h": self.h}


@dataclass(frozen=True, eq=False)
class Discretization:
    """Finite list of extremal Bloch points standing in for a state space."""

    parent: Cylinder | Spindle | None
    n_angles: int
    points: np.ndarray
    offset: float = 0.0
    kind: str = field(default="")

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 3)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if not self.kind:
            kind = "seed" if self.parent is None else self.parent.describe()["kind"]
            object.__setattr__(self, "kind", kind)

    def __len__(self) -> int:
        return len(self.points)

    def bloch_ops(self) -> list[BlochOp]:
        return [BlochOp(*p) for p in self.points]

    @property
    def max_radius(self) -> float:
        if len(self.points) == 0:
            return 0.0
        return float(np.max(np.hypot(self.points[:, 0], self.points[:, 1])))

    def hausdorff_gap(self) -> float:
        """Chord-vs-arc gap r (1 - cos(pi/n)) between the parent and this polygon."""
        r = self.parent.r if self.parent is not None else self.max_radius
        return r * (1.0 - math.cos(math.pi / self.n_angles))

    def contains(self, op: BlochOp, tol: float = MEMBERSHIP_TOL) -> bool:
        """Convex-hull membership of op, decided by an LP feasibility problem."""
        return hull_contains(self.points, np.array([op.x, op.y, op.z]), tol)

    def polygon_radius_at(self, azimuth: float) -> float:
        """Boundary radius of a cylinder polygon along the given azimuth."""
        if self.kind != "cylinder":
            raise ValueError("polygon_radius_at is only defined for cylinder polygons")
        step = TWO_PI / self.n_angles
        delta = reduce_angle(azimuth - self.offset) % step - step / 2
        return self.parent.r * math.cos(step / 2) / math.cos(delta)

    def polygon_contains(self, op: BlochOp, tol: float = MEMBERSHIP_TOL) -> bool:
        return abs(op.z) <= 1.0 + tol and op.radius <= self.polygon_radius_at(op.azimuth) + tol

    def phased(self, r: float) -> "Discretization":
        """Image under the phasing map T_r."""
        parent = self.parent
        if isinstance(parent, Cylinder):
            parent = Cylinder(parent.r * r)
        elif isinstance(parent, Spindle):
            parent = Spindle(parent.r * r, parent.h)
        pts = np.array(self.points)
        pts[:, :2] *= r
        return Discretization(parent, self.n_angles, dedupe(pts), self.offset, self.kind)

    def describe(self) -> dict:
        base = self.parent.describe() if self.parent is not None else {"kind": self.kind}
        return {**base, "n_angles": self.n_angles, "n_points": len(self)}


def _circle(r: float, z: float, n_angles: int, offset: float) -> np.ndarray:
    angles = offset + TWO_PI * np.arange(n_angles) / n_angles
    return np.column_stack(
        [r * np.cos(angles), r * np.sin(angles), np.full(n_angles, float(z))]
    )


def dedupe(points: np.ndarray, tol: float = DEDUP_TOL) -> np.ndarray:
    kept: list[np.ndarray] = []
    for p in np.asarray(points, dtype=float).reshape(-1, 3):
        if all(np.linalg.norm(p - q) > tol for q in kept):
            kept.append(p)
    return np.array(kept).reshape(-1, 3)


def hull_contains(points: np.ndarray, target: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(points) == 0:
        return False
    a_eq = np.vstack([np.ones(len(points)), points.T])
    b_eq = np.concatenate([[1.0], target])
    res = linprog(
        np.zeros(len(points)),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=(0, None),
        method="highs",
        options={"primal_feasibility_tolerance": max(tol, 1e-10)},
    )
    return res.status == 0


def cylinder_extremals(r: float, n_angles: int, offset: float = 0.0) -> Discretization:
    if n_angles < 3:
        raise ValueError(f"n_angles must be at least 3, got {n_angles}")
    pts = np.vstack([_circle(r, 1.0, n_angles, offset), _circle(r, -1.0, n_angles, offset)])
    return Discretization(Cylinder(r), n_angles, dedupe(pts), offset)


def spindle_extremals(r: float, h: float, n_angles: int, offset: float = 0.0) -> Discretization:
    if n_angles < 3:
        raise ValueError(f"n_angles must be at least 3, got {n_angles}")
    spindle = Spindle(r, h)
    poles = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    if r == 0.0:
        return Discretization(spindle, n_angles, poles, offset)
    circles = [_circle(r, h, n_angles, offset), _circle(r, -h, n_angles, offset)]
    # at h = 1 the poles sit inside the end discs
    if h < 1.0:
        circles.append(poles)
    return Discretization(spindle, n_angles, dedupe(np.vstack(circles)), offset)


def seed_space(points: list[BlochOp] | np.ndarray, n_angles: int) -> Discretization:
    """A hand-built (possibly asymmetric) finite state space."""
    if isinstance(points, np.ndarray):
        pts = points
    else:
        pts = np.array([[p.x, p.y, p.z] for p in points])
    return Discretization(None, n_angles, dedupe(pts), kind="seed")


def phasing(rho: BlochOp, r: float) -> BlochOp:
    """T_r: scale the x, y Bloch components by r, keep z."""
    if r < 0:
        raise ValueError(f"Phasing factor must be non-negative, got {r}")
    return rho.scaled_xy(r)


def _extremal_subset(points: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    keep = []
    for i in range(len(points)):
        others = np.delete(points, i, axis=0)
        if not hull_contains(others, points[i], tol):
            keep.append(i)
    return points[keep]


def symmetrize(points: Discretization, n_angles: int) -> Discretization:
    """Extremals of the hull of the n_angles-fold Z-rotation orbit of every point."""
    if n_angles < 1:
        raise ValueError(f"n_angles must be positive, got {n_angles}")
    orbit = []
    for x, y, z in points.points:
        radius = math.hypot(x, y)
        start = math.atan2(y, x) if radius > 0 else 0.0
        orbit.append(_circle(radius, z, n_angles, start))
    union = dedupe(np.vstack(orbit))
    return Discretization(points.parent, n_angles, _extremal_subset(union), kind="symmetrized")


def angles_for_margin(eta: float) -> int:
    """Smallest polygon size whose inscribed disc clears (1 + eta/2) of the un-inflated radius."""
    if eta <= 0:
        raise MarginTooSmallError(f"Polygon margin needs eta > 0, got {eta}")
    need = (1.0 + eta / 2.0) / (1.0 + eta)
    n = math.ceil(math.pi / math.acos(need))
    while (1.0 + eta) * math.cos(math.pi / n) < 1.0 + eta / 2.0:
        n += 1
    return max(MIN_SAMPLER_ANGLES, n)


def space_from_config(config: dict, default_angles: int = 40) -> Discretization:
    """Build a discretization from {"kind": "cylinder"|"spindle", "r": ..., "h": ..., "n_angles": ...}."""
    kind = config.get("kind")
    n_angles = int(config.get("n_angles", default_angles))
    match kind:
        case "cylinder":
            return cylinder_extremals(float(config["r"]), n_angles)
        case "spindle":
            r = float(config["r"])
            h = float(config["h"]) if "h" in config else math.sqrt(max(0.0, 1 - r * r))
            return spindle_extremals(r, h, n_angles)
        case _:
            raise ValueError(f"Unknown state space kind: {kind!r}")
