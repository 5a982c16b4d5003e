"""Layer-adapted polar quadrilateral meshes on the annular domain.

Elements are boxes ``[r0, r1] x [t0, t1]`` in polar coordinates and are
mapped exactly (no isoparametric approximation). When ``kappa*p*eps < 1/2``
a needle band of width ``rho0*kappa*p*eps/2`` is placed along ``r = a`` and
one of width ``rho_sigma*kappa*p*eps/2`` along the plus side of ``r = b``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, AnnularGeometry

ASYMPTOTIC = "asymptotic"
PREASYMPTOTIC = "preasymptotic"

PLUS = "plus"
MINUS = "minus"

BOUNDARY_NEEDLE = "boundary-needle"
INTERFACE_NEEDLE = "interface-needle"
BULK = "bulk"


class MeshError(ValueError):
    pass


@dataclass(frozen=True)
class Element:
    r0: float
    r1: float
    t0: float
    t1: float
    region: str
    band: str = BULK
    # structured position: radial band index and angular sector index
    ir: int = 0
    it: int = 0

    @property
    def dr(self) -> float:
        return self.r1 - self.r0

    @property
    def dt(self) -> float:
        return self.t1 - self.t0

    def area(self) -> float:
        return 0.5 * (self.r1**2 - self.r0**2) * self.dt


@dataclass(frozen=True, eq=False)
class LayerMesh:
    """Tensor mesh given by radial and angular breakpoints."""

    geometry: AnnularGeometry
    radial: np.ndarray
    angular: np.ndarray
    regions: tuple[str, ...]
    bands: tuple[str, ...]
    regime: str = ASYMPTOTIC
    p: int = 1
    eps: float = 1.0
    kappa: float = 1.0
    w_bl: float = 0.0
    w_il: float = 0.0
    elements: tuple[Element, ...] = field(init=False)

    def __post_init__(self):
        radial = np.asarray(self.radial, dtype=float)
        angular = np.asarray(self.angular, dtype=float)
        if np.any(np.diff(radial) <= 0) or np.any(np.diff(angular) <= 0):
            raise MeshError("breakpoints must be strictly increasing")
        if len(self.regions) != len(radial) - 1 or len(self.bands) != len(radial) - 1:
            raise MeshError("one region and band tag per radial band")
        object.__setattr__(self, "radial", radial)
        object.__setattr__(self, "angular", angular)
        elements = tuple(
            Element(
                float(radial[i]), float(radial[i + 1]),
                float(angular[j]), float(angular[j + 1]),
                self.regions[i], self.bands[i], i, j,
            )
            for i in range(len(radial) - 1)
            for j in range(len(angular) - 1)
        )
        object.__setattr__(self, "elements", elements)

    @property
    def n_radial(self) -> int:
        return len(self.radial) - 1

    @property
    def m(self) -> int:
        return len(self.angular) - 1

    @property
    def periodic(self) -> bool:
        return abs(self.angular[-1] - self.angular[0] - TWO_PI) < 1e-12

    def element_index(self, ir: int, it: int) -> int:
        return ir * self.m + it

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "m": self.m,
            "p": self.p,
            "eps": self.eps,
            "kappa": self.kappa,
            "w_bl": self.w_bl,
            "w_il": self.w_il,
            "elements": [
                {"r0": e.r0, "r1": e.r1, "t0": e.t0, "t1": e.t1,
                 "region": e.region, "band": e.band}
                for e in self.elements
            ],
        }

    def to_json(self) -> str:
        return dumps_17(self.to_dict())


def _fmt17(x: float) -> str:
    return format(x, ".17g")


def dumps_17(obj) -> str:
    """JSON with floats written to 17 significant digits."""

    def enc(o):
        if isinstance(o, float):
            if not math.isfinite(o):
                raise ValueError("non-finite float in output")
            return _fmt17(o)
        if isinstance(o, dict):
            return "{" + ", ".join(f"{json.dumps(k)}: {enc(v)}" for k, v in o.items()) + "}"
        if isinstance(o, (list, tuple)):
            return "[" + ", ".join(enc(v) for v in o) + "]"
        if isinstance(o, (np.floating,)):
            return enc(float(o))
        if isinstance(o, (np.integer,)):
            return str(int(o))
        return json.dumps(o)

    return enc(obj)


def build_mesh(
    geom: AnnularGeometry,
    m: int = 16,
    p: int = 1,
    eps: float = 1.0,
    kappa: float = 1.0,
    rho0: float | None = None,
    rho_sigma: float | None = None,
    n_bulk_plus: int = 2,
    n_bulk_minus: int = 3,
) -> LayerMesh:
    """Build the regime-dependent layer mesh.

    Asymptotic regime (``kappa*p*eps >= 1/2``): each annulus is cut in half
    radially. Preasymptotic regime: needle bands at ``r = a`` and on the
    plus side of ``r = b``, the remaining plus strip split into
    ``n_bulk_plus`` equal bands, the minus annulus into ``n_bulk_minus``.
    """
    a, b, c = geom.radii
    rho0 = geom.default_rho0() if rho0 is None else rho0
    rho_sigma = geom.default_rho_sigma() if rho_sigma is None else rho_sigma
    if m < 4:
        raise MeshError(f"need at least 4 sectors, got m={m}")
    if p < 1:
        raise MeshError(f"degree must be at least 1, got p={p}")
    if not (0 < eps <= 1):
        raise MeshError(f"eps must lie in (0, 1], got {eps}")
    if not kappa > 0:
        raise MeshError(f"kappa must be positive, got {kappa}")
    if not (0 < rho0 < a):
        raise MeshError(f"rho0 must lie in (0, a={a}), got {rho0}")
    if not (0 < rho_sigma < min(b - a, b)):
        raise MeshError(f"rho_sigma must lie in (0, {min(b - a, b)}), got {rho_sigma}")
    if n_bulk_plus < 1 or n_bulk_minus < 1:
        raise MeshError("bulk subdivision counts must be positive")

    angular = TWO_PI * np.arange(m + 1) / m
    kpe = kappa * p * eps
    if kpe >= 0.5:
        radial = [a, 0.5 * (a + b), b, 0.5 * (b + c), c]
        regions = (PLUS, PLUS, MINUS, MINUS)
        bands = (BULK,) * 4
        return LayerMesh(geom, np.array(radial), angular, regions, bands,
                         ASYMPTOTIC, p, eps, kappa, 0.0, 0.0)

    w_bl = 0.5 * rho0 * kpe
    w_il = 0.5 * rho_sigma * kpe
    half = 0.5 * (b - a)
    if w_bl >= half or w_il >= half or w_bl + w_il >= b - a:
        raise MeshError(
            f"needle widths ({w_bl:.3g}, {w_il:.3g}) reach half the plus annulus "
            f"thickness {half:.3g}; reduce kappa, p or eps"
        )
    lo, hi = a + w_bl, b - w_il
    plus_bulk = lo + (hi - lo) * np.arange(n_bulk_plus + 1) / n_bulk_plus
    minus = b + (c - b) * np.arange(n_bulk_minus + 1) / n_bulk_minus
    radial = np.concatenate([[a], plus_bulk, [b], minus[1:]])
    # endpoints exactly as given
    radial[0], radial[n_bulk_plus + 2], radial[-1] = a, b, c
    regions = (PLUS,) * (n_bulk_plus + 2) + (MINUS,) * n_bulk_minus
    bands = (BOUNDARY_NEEDLE,) + (BULK,) * n_bulk_plus + (INTERFACE_NEEDLE,) + (BULK,) * n_bulk_minus
    return LayerMesh(geom, radial, angular, regions, bands,
                     PREASYMPTOTIC, p, eps, kappa, w_bl, w_il)


def element_map(elem: Element, xi, eta):
    """Exact polar map of the reference square onto an element.

    Returns ``(point, jacobian, det)``; ``jacobian[..., i, j]`` is
    ``d x_i / d (xi, eta)_j``. Works elementwise on arrays.
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if np.any(np.abs(xi) > 1 + 1e-14) or np.any(np.abs(eta) > 1 + 1e-14):
        raise ValueError("reference coordinates must lie in [-1, 1]^2")
    hr, ht = 0.5 * elem.dr, 0.5 * elem.dt
    r = elem.r0 + hr * (xi + 1.0)
    t = elem.t0 + ht * (eta + 1.0)
    c, s = np.cos(t), np.sin(t)
    point = np.stack([r * c, r * s], axis=-1)
    jac = np.empty(np.shape(r) + (2, 2))
    jac[..., 0, 0] = hr * c
    jac[..., 1, 0] = hr * s
    jac[..., 0, 1] = -r * s * ht
    jac[..., 1, 1] = r * c * ht
    det = r * hr * ht
    return point, jac, det
