"""Cylinder separability criterion, the disentangling growth law and region maps."""

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.optimize import brentq

from shared.errors import RegionSaturated
from shared.pauli_core import reduce_angle

# Rounding floor when the determinant polynomial is evaluated exactly on its zero set
DET_ROUNDING_FLOOR = 64 * 2.220446049250313e-16
ROOT_RESIDUAL = 1e-12


@dataclass(frozen=True)
class GrowthQuery:
    f_a: float
    f_b: float
    phi: float

    def __post_init__(self):
        if not (self.f_a > 0 and self.f_b > 0):
            raise ValueError(f"Shrink ratios must be positive, got {self.f_a}, {self.f_b}")


@dataclass(frozen=True)
class RegionPoint:
    phi: float
    theta: float
    D: int
    T: float | None = None

    @property
    def r(self) -> float:
        return math.sin(self.theta)


def _is_identity_phase(phi: float) -> bool:
    reduced = reduce_angle(phi)
    return reduced < 1e-15 or reduced > 2 * math.pi - 1e-15


def separability_determinant(q: GrowthQuery) -> float:
    fa2, fb2 = q.f_a**2, q.f_b**2
    return (
        (1 + fa2**2) * (1 + fb2**2)
        - 2 * (fa2 + fb2)
        + 2 * (2 - fa2 - fb2) * fa2 * fb2 * math.cos(q.phi)
    )


def symmetric_determinant(f: float, phi: float) -> float:
    """Separability determinant at f_a = f_b = f, in factored form."""
    g = 1 - f**2
    return g * (g**3 + 4 * (math.cos(phi) - 1) * f**4)


def is_cyl_separable(q: GrowthQuery, tol: float = 0.0) -> bool:
    if _is_identity_phase(q.phi):
        return q.f_a <= 1 and q.f_b <= 1
    if not (q.f_a < 1 and q.f_b < 1):
        return False
    return separability_determinant(q) >= -(tol + DET_ROUNDING_FLOOR)


def growth_cubic(t: float, alpha: float) -> float:
    return t**3 + alpha * t + alpha


@lru_cache(maxsize=4096)
def _lambda_cached(phi: float) -> float:
    alpha = 4 * (math.cos(phi) - 1)
    if alpha == 0.0:
        return 1.0
    t_hi = 1.0
    while growth_cubic(t_hi, alpha) <= 0:
        t_hi *= 2.0
    root = brentq(growth_cubic, 0.0, t_hi, args=(alpha,), xtol=1e-15, rtol=8.9e-16, maxiter=500)
    if abs(growth_cubic(root, alpha)) > ROOT_RESIDUAL:
        raise ArithmeticError(f"Growth cubic root {root} misses the residual bound")
    return math.sqrt(root + 1)


def lambda_of_phi(phi: float) -> float:
    """Disentangling growth rate: sqrt(T + 1), T the positive root of t^3 + a t + a."""
    return _lambda_cached(reduce_angle(phi))


def region_r_max(phi: float, D: int) -> float:
    if D < 1:
        raise ValueError(f"D must be a positive integer, got {D}")
    return lambda_of_phi(phi) ** (-D)


def thermal_excitation(T: float) -> float:
    """p_T = e^{-1/T} / (1 + e^{-1/T}) with k_B = 1; zero at T = 0."""
    if T < 0:
        raise ValueError(f"Temperature must be non-negative, got {T}")
    if T == 0:
        return 0.0
    w = math.exp(-1.0 / T)
    return w / (1 + w)


def thermal_shrink(T: float | None) -> float:
    """Bloch-vector shrink factor 1 - 2 p_T (1 when no temperature is given)."""
    if T is None:
        return 1.0
    return 1.0 - 2.0 * thermal_excitation(T)


def region_theta_max(phi: float, D: int, T: float | None = None) -> float:
    """Largest simulatable polar angle; raises RegionSaturated past the whole range."""
    shrink = thermal_shrink(T)
    if shrink <= 0:
        raise RegionSaturated(math.inf)
    ratio = region_r_max(phi, D) / shrink
    if ratio > 1:
        raise RegionSaturated(ratio)
    return math.asin(ratio)


def curve_lambda(grid: list[float]) -> list[tuple[float, float]]:
    return [(phi, lambda_of_phi(phi)) for phi in grid]


def curve_region(
    D: int, grid: list[float], T: float | None = None
) -> list[tuple[float, float, bool]]:
    """(phi, theta_max, saturated) per grid point; saturated rows carry pi/2."""
    rows = []
    for phi in grid:
        try:
            rows.append((phi, region_theta_max(phi, D, T), False))
        except RegionSaturated:
            rows.append((phi, math.pi / 2, True))
    return rows


def min_cylinder_radius(r_a: float, r_b: float, phi: float) -> float:
    """Smallest common output radius R with Cyl(r_a) x Cyl(r_b) -> Cyl(R) x Cyl(R) separable.

    Infimum over R > max(r_a, r_b); equals lambda(phi) r in the symmetric case.
    """
    r_big = max(r_a, r_b)
    if r_big <= 0:
        return 0.0
    if _is_identity_phase(phi) or min(r_a, r_b) <= 0:
        return r_big
    if math.isclose(r_a, r_b, rel_tol=1e-15):
        return lambda_of_phi(phi) * r_big

    def det_at(R: float) -> float:
        return separability_determinant(GrowthQuery(r_a / R, r_b / R, phi))

    lo = r_big * (1 + 1e-12)
    hi = 2.0 * r_big
    while det_at(hi) < 0:
        hi *= 2.0
    return brentq(det_at, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=500)
