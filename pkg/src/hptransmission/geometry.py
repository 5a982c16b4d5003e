"""Concentric-circle geometry and boundary-fitted coordinates.

The domain is the annulus ``a < r < c`` split by the interface circle
``r = b`` into an inner annulus (the plus region, small diffusion) and an
outer annulus (the minus region).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# needle widths scale with the tube depth; 0.9 keeps a margin to the bounds
DEPTH_FRACTION = 0.9


def canonical_angle(theta):
    """Map angles into ``[0, 2*pi)``."""
    return np.mod(theta, TWO_PI)


@dataclass(frozen=True)
class CirclePoint:
    point: tuple[float, float]
    tangent: tuple[float, float]
    normal: tuple[float, float]
    curvature: float


def circle_point(radius: float, theta: float) -> CirclePoint:
    """Point, unit tangent, outward unit normal and curvature on a circle."""
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    c, s = math.cos(theta), math.sin(theta)
    return CirclePoint(
        point=(radius * c, radius * s),
        tangent=(-s, c),
        normal=(c, s),
        curvature=1.0 / radius,
    )


@dataclass(frozen=True)
class AnnularGeometry:
    """Three concentric radii ``a < b < c``.

    ``r = a`` is the outer boundary of the plus region away from the
    interface, ``r = b`` is the interface and ``r = c`` closes the minus
    region.
    """

    a: float = 1.0
    b: float = 2.0
    c: float = 3.0

    def __post_init__(self):
        if not (0 < self.a < self.b < self.c):
            raise ValueError(
                f"radii must satisfy 0 < a < b < c, got ({self.a}, {self.b}, {self.c})"
            )

    @property
    def radii(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def area(self) -> float:
        return math.pi * (self.c**2 - self.a**2)

    def curvature(self, radius: float) -> float:
        return 1.0 / radius

    def arc_length(self, radius: float, theta: float) -> float:
        return radius * theta

    def default_rho0(self) -> float:
        """Tubular depth at ``r = a``: 0.9 of the curvature bound ``a``."""
        return DEPTH_FRACTION * self.a

    def default_rho_sigma(self) -> float:
        """Tubular depth at the interface: 0.9 of ``min(b - a, b)`` so the
        tube stays inside the plus annulus and below the curvature bound."""
        return DEPTH_FRACTION * min(self.b - self.a, self.b)

    def region_of(self, r):
        """+1 inside the plus annulus (``r <= b``), -1 otherwise."""
        return np.where(np.asarray(r) <= self.b, 1, -1)


@dataclass(frozen=True)
class BoundaryFittedFrame:
    """Boundary-fitted coordinates ``(rho, theta)`` about one circle.

    ``orientation=+1`` moves into the plus region by increasing the radius
    (the frame at ``r = a``); ``orientation=-1`` moves inward from the
    interface (the frame at ``r = b``).
    """

    curve_radius: float
    rho_max: float
    orientation: int = 1

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        if not self.curve_radius > 0:
            raise ValueError("curve_radius must be positive")
        # tube depth must stay below the radius of curvature
        if not (0 < self.rho_max < self.curve_radius):
            raise ValueError(
                f"rho_max must lie in (0, {self.curve_radius}), got {self.rho_max}"
            )

    def radius_at(self, rho):
        return self.curve_radius + self.orientation * np.asarray(rho, dtype=float)

    def depth_of(self, r):
        """Inverse of :meth:`radius_at` (distance into the plus region)."""
        return self.orientation * (np.asarray(r, dtype=float) - self.curve_radius)


def psi_map(frame: BoundaryFittedFrame, rho, theta):
    """Point at depth ``rho`` below the circle, along the inward normal."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0) or np.any(rho > frame.rho_max):
        raise ValueError(f"rho must lie in [0, {frame.rho_max}]")
    r = frame.radius_at(rho)
    theta = np.asarray(theta, dtype=float)
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)
