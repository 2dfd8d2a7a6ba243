"""Pseudohyperbolic geometry of the unit disk.

Distances, disk automorphisms, pseudohyperbolic disks, and the tangent
geodesic construction used to cover an outer annulus with curvilinear
rectangles.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .expr import Expr, mobius


def _require_in_disk(*points):
    for w in points:
        if abs(w) >= 1.0:
            raise DomainError("point outside the open unit disk")


def rho(alpha: complex, beta: complex) -> float:
    """Pseudohyperbolic distance |(a - b) / (1 - conj(a) b)|."""
    _require_in_disk(alpha, beta)
    return abs((alpha - beta) / (1.0 - np.conj(alpha) * beta))


def hyp_dist(alpha: complex, beta: complex) -> float:
    """Hyperbolic distance (1/2) log((1 + rho) / (1 - rho)) = atanh(rho)."""
    return math.atanh(rho(alpha, beta))


@dataclass(frozen=True)
class MobiusSelfMap:
    """Disk automorphism z -> e^{i theta} (z + a) / (1 + conj(a) z), |a| < 1."""

    a: complex
    theta: float = 0.0

    def __post_init__(self):
        if abs(self.a) >= 1.0:
            raise DomainError("automorphism parameter must satisfy |a| < 1")

    def __call__(self, z):
        return np.exp(1j * self.theta) * (z + self.a) / (1.0 + np.conj(self.a) * z)

    def inverse(self) -> "MobiusSelfMap":
        return MobiusSelfMap(-self.a * np.exp(1j * self.theta), -self.theta)

    def as_expr(self) -> Expr:
        rot = np.exp(1j * self.theta)
        return mobius(rot, rot * self.a, np.conj(self.a), 1.0)

    def circle_deviation(self, n: int = 32) -> float:
        """Max | |image| - 1 | over n unit-circle samples."""
        w = np.exp(2j * np.pi * np.arange(n) / n)
        return float(np.max(np.abs(np.abs(self(w)) - 1.0)))

    @staticmethod
    def sample(rng: np.random.Generator, max_mod: float = 0.8) -> "MobiusSelfMap":
        radius = max_mod * np.sqrt(rng.uniform())
        return MobiusSelfMap(
            radius * np.exp(2j * np.pi * rng.uniform()), float(rng.uniform(0.0, 2 * np.pi))
        )


@dataclass
class PseudoDisk:
    """Pseudohyperbolic disk {rho(z, center) < radius}; a Euclidean disk
    whose Euclidean center and radius differ from (center, radius) unless
    the center is the origin."""

    center: complex
    radius: float
    euclidean_center: complex
    euclidean_radius: float

    def boundary_points(self, n: int = 64) -> np.ndarray:
        t = np.exp(2j * np.pi * np.arange(n) / n)
        a = self.center
        w = self.radius * t
        return (w + a) / (1.0 + np.conj(a) * w)


def pseudo_disk(alpha: complex, r: float) -> PseudoDisk:
    """Euclidean parameters from the diameter endpoints under the
    centering automorphism."""
    _require_in_disk(alpha)
    if not 0 < r < 1:
        raise DomainError("pseudohyperbolic radius must lie in (0, 1)")
    u = alpha / abs(alpha) if alpha != 0 else 1.0
    ends = [(w + alpha) / (1.0 + np.conj(alpha) * w) for w in (r * u, -r * u)]
    center = (ends[0] + ends[1]) / 2.0
    return PseudoDisk(
        center=complex(alpha),
        radius=float(r),
        euclidean_center=complex(center),
        euclidean_radius=float(abs(ends[0] - ends[1]) / 2.0),
    )


def geodesic_length(alpha: complex, beta: complex, n: int = 512) -> float:
    """Hyperbolic length of the geodesic from alpha to beta by quadrature
    of |dz| / (1 - |z|^2) along the pulled-back diameter."""
    _require_in_disk(alpha, beta)
    if alpha == beta:
        return 0.0
    move = MobiusSelfMap(-alpha)  # sends alpha to 0
    w = move(beta)
    nodes, weights = np.polynomial.legendre.leggauss(n)
    t = 0.5 * (nodes + 1.0)
    back = MobiusSelfMap(alpha)
    z = back(t * w)
    dz = w * (1.0 - abs(alpha) ** 2) / (1.0 + np.conj(alpha) * t * w) ** 2
    integrand = np.abs(dz) / (1.0 - np.abs(z) ** 2)
    return float(0.5 * np.sum(weights * integrand))


# ---------------------------------------------------------------------------
# Tangent-geodesic covering of the outer annulus


@dataclass(frozen=True)
class GeodesicRectangleSpec:
    """Geometry of one curvilinear rectangle cut from the annulus R <= |z| < 1
    by a hyperbolic geodesic tangent to the inner circle |z| = R1."""

    C: float
    R: float
    R1: float
    y: float
    half_angle: float
    tangency_angle: float = 0.0
    meets_floor: bool = field(default=True, compare=False)


def geodesic_rectangle(C: float) -> GeodesicRectangleSpec:
    """Tangent-geodesic data for the outer annulus at growth constant C > 2.

    The canonical geodesic is the image of the imaginary axis under
    T(z) = (z + R1)/(1 + R1 z); it touches |z| = R1 at R1 and meets
    |z| = R at angles +-half_angle, where the crossing parameter satisfies
    y^2 = 2C / (6C - 1).  ``meets_floor`` records whether the covering
    floor half_angle >= 1/(5C) held numerically for this C.
    """
    if C <= 2:
        raise DomainError("the growth context needs C > 2")
    R = math.sqrt(1.0 - 1.0 / (4.0 * C))
    R1 = math.sqrt(1.0 - 1.0 / (2.0 * C))
    y = math.sqrt(2.0 * C / (6.0 * C - 1.0))
    t_iy = (1j * y + R1) / (1.0 + R1 * 1j * y)
    half_angle = float(np.angle(t_iy))
    return GeodesicRectangleSpec(
        C=float(C),
        R=R,
        R1=R1,
        y=y,
        half_angle=half_angle,
        meets_floor=half_angle >= 1.0 / (5.0 * C),
    )


def rectangle_count(C: float) -> int:
    """Number of tangent-geodesic rectangles needed to cover the annulus
    R <= |z| < 1: floor(5 pi C) + 1 once the angular floor holds, otherwise
    the direct count ceil(pi / half_angle) with a warning."""
    spec = geodesic_rectangle(C)
    if spec.meets_floor:
        return int(math.floor(5.0 * math.pi * C)) + 1
    warnings.warn(
        f"half-angle floor 1/(5C) failed at C={C}; using the direct angular count",
        stacklevel=2,
    )
    return int(math.ceil(math.pi / spec.half_angle))
