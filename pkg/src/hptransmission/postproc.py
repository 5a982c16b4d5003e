"""Energy and L2 norms, errors against radial oracles, rate fitting."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate

from .mesh import PLUS, dumps_17
from .quadrature import gauss_legendre, nodal_basis
from .space import DiscreteField, FeSpace

Radial = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

CSV_FIELDS = ("eps", "p", "N", "err_energy_abs", "err_energy_rel", "err_l2", "runtime_ms")


@dataclass(frozen=True, eq=False)
class Samples:
    """Values and polar gradient components at element quadrature points.

    ``grad_r`` is ``du/dr`` and ``grad_t`` is ``(1/r) du/dtheta``; ``dx`` holds
    quadrature weight times Jacobian and ``weight`` the diffusion weight of
    the owning element, all shaped ``(n_cells, n_points)`` where cells are
    the layer-graded radial pieces of the elements.
    """

    value: np.ndarray
    grad_r: np.ndarray
    grad_t: np.ndarray
    dx: np.ndarray
    weight: np.ndarray
    r: np.ndarray
    theta: np.ndarray

    def __sub__(self, other: "Samples") -> "Samples":
        return Samples(self.value - other.value, self.grad_r - other.grad_r,
                       self.grad_t - other.grad_t, self.dx, self.weight, self.r, self.theta)

    def __add__(self, other: "Samples") -> "Samples":
        return Samples(self.value + other.value, self.grad_r + other.grad_r,
                       self.grad_t + other.grad_t, self.dx, self.weight, self.r, self.theta)

    def scale(self, s: float) -> "Samples":
        return Samples(s * self.value, s * self.grad_r, s * self.grad_t,
                       self.dx, self.weight, self.r, self.theta)


def _cells(space: FeSpace, eps: float):
    """Split every element radially at layer-graded radii.

    Returns the owning element of each sub-cell and the sub-cell bounds in
    the element's reference coordinate. The tail of an exponential layer
    can reach past the needle elements into a bulk element; the grading
    keeps the error integrand resolved there.
    """
    a, b, c = space.mesh.geometry.radii
    grade = radial_breakpoints(a, b, c, eps)
    owner, lo, hi = [], [], []
    for e, elem in enumerate(space.mesh.elements):
        inner = grade[(grade > elem.r0) & (grade < elem.r1)]
        cuts = np.concatenate([[-1.0], 2.0 * (inner - elem.r0) / elem.dr - 1.0, [1.0]])
        owner.extend([e] * (len(cuts) - 1))
        lo.extend(cuts[:-1])
        hi.extend(cuts[1:])
    return np.array(owner), np.array(lo), np.array(hi)


def _points(space: FeSpace, quad_order: int, eps: float):
    """Quadrature points per sub-cell: owner, radial reference nodes,
    angular reference nodes, and physical ``r``, ``theta``, ``dx``."""
    rule = gauss_legendre(quad_order)
    owner, lo, hi = _cells(space, eps)
    half = 0.5 * (hi - lo)[:, None]
    xi = lo[:, None] + half * (rule.nodes + 1.0)
    wr = half * rule.weights
    elems = space.mesh.elements
    r0 = np.array([elems[e].r0 for e in owner])[:, None]
    t0 = np.array([elems[e].t0 for e in owner])[:, None]
    hr = np.array([0.5 * elems[e].dr for e in owner])[:, None]
    ht = np.array([0.5 * elems[e].dt for e in owner])[:, None]
    rq = r0 + hr * (xi + 1.0)
    tq = t0 + ht * (rule.nodes + 1.0)
    n = quad_order
    r = np.repeat(rq, n, axis=1)
    t = np.tile(tq, (1, n))
    dx = (wr[:, :, None] * rule.weights[None, None, :]).reshape(-1, n * n) * r * hr * ht
    return owner, xi, rule.nodes, r, t, dx


def sample_field(field: DiscreteField, quad_order: int, eps: float) -> Samples:
    space = field.space
    owner, xi, eta, r, t, dx = _points(space, quad_order, eps)
    basis = nodal_basis(space.p)
    vr, dr = basis.tables(xi.ravel())
    vr = vr.reshape(*xi.shape, -1)
    dr = dr.reshape(*xi.shape, -1)
    vt, dt = basis.tables(eta)
    vals = field.values[space.local_to_global].reshape(-1, space.p + 1, space.p + 1)[owner]
    hr = np.array([0.5 * e.dr for e in space.mesh.elements])[owner, None, None]
    ht = np.array([0.5 * e.dt for e in space.mesh.elements])[owner, None, None]
    u = np.einsum("cqi,cij,sj->cqs", vr, vals, vt)
    ur = np.einsum("cqi,cij,sj->cqs", dr, vals, vt) / hr
    ut = np.einsum("cqi,cij,sj->cqs", vr, vals, dt) / ht
    u, ur, ut = (arr.reshape(len(owner), -1) for arr in (u, ur, ut))
    return Samples(u, ur, ut / r, dx, _weights(space, eps, owner, r.shape), r, t)


def sample_radial(space: FeSpace, exact: Radial, quad_order: int, eps: float) -> Samples:
    owner, _, _, r, t, dx = _points(space, quad_order, eps)
    u, du = exact(r.ravel())
    return Samples(np.reshape(u, r.shape), np.reshape(du, r.shape), np.zeros_like(r),
                   dx, _weights(space, eps, owner, r.shape), r, t)


def _weights(space: FeSpace, eps: float, owner: np.ndarray, shape) -> np.ndarray:
    w = np.array([eps**2 if e.region == PLUS else 1.0 for e in space.mesh.elements])
    return np.broadcast_to(w[owner, None], shape)


def energy_inner(a: Samples, b: Samples) -> float:
    """Discrete energy inner product ``B_eps(a, b)`` of two sampled functions."""
    integrand = a.weight * (a.grad_r * b.grad_r + a.grad_t * b.grad_t) + a.value * b.value
    return float(np.sum(integrand * a.dx))


def l2_norm(s: Samples) -> float:
    return math.sqrt(float(np.sum(s.value**2 * s.dx)))


def _check_order(space: FeSpace, quad_order: int):
    if quad_order < space.p + 3:
        raise ValueError(f"quadrature order {quad_order} below p + 3 = {space.p + 3}")


def energy_norm(
    field: DiscreteField | None,
    space: FeSpace,
    eps: float,
    exact: Radial | None = None,
    quad_order: int | None = None,
) -> float:
    """Energy norm of ``field``, of ``exact``, or of ``exact - field``."""
    quad_order = space.p + 5 if quad_order is None else quad_order
    _check_order(space, quad_order)
    if field is None and exact is None:
        return 0.0
    if field is not None:
        s = sample_field(field, quad_order, eps)
        if exact is not None:
            s = sample_radial(space, exact, quad_order, eps) - s
    else:
        s = sample_radial(space, exact, quad_order, eps)
    return math.sqrt(max(energy_inner(s, s), 0.0))


def radial_breakpoints(a: float, b: float, c: float, eps: float) -> np.ndarray:
    """Subdivision of ``[a, c]`` graded geometrically into both layers."""
    pts = [a, b, c]
    depth = eps
    while depth < 0.5 * (b - a):
        pts += [a + depth, b - depth]
        depth *= 2.0
    return np.unique(np.clip(pts, a, c))


def oracle_energy_norm(exact: Radial, a: float, b: float, c: float, eps: float,
                       n: int = 20) -> float:
    """``2 pi int (w u'^2 + u^2) r dr`` by composite Gauss-Legendre on a
    layer-graded 1D subdivision; independent of the 2D mesh."""
    rule = gauss_legendre(n)
    pts = radial_breakpoints(a, b, c, eps)
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        h = 0.5 * (hi - lo)
        r = lo + h * (rule.nodes + 1.0)
        u, du = exact(r)
        w = eps**2 if hi <= b else 1.0
        total += h * float(np.dot(rule.weights, (w * du**2 + u**2) * r))
    return math.sqrt(2.0 * math.pi * total)


def oracle_energy_norm_adaptive(exact: Radial, a: float, b: float, c: float,
                                eps: float) -> float:
    """Same quantity via adaptive quadrature (cross-check)."""

    def integrand(r, w):
        u, du = exact(np.array([r]))
        return float((w * du[0] ** 2 + u[0] ** 2) * r)

    pts = radial_breakpoints(a, b, c, eps)
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        w = eps**2 if hi <= b else 1.0
        val, _ = integrate.quad(integrand, lo, hi, args=(w,), epsabs=0.0,
                                epsrel=1e-13, limit=200)
        total += val
    return math.sqrt(2.0 * math.pi * total)


@dataclass(frozen=True)
class SweepRecord:
    eps: float
    p: int
    N: int
    err_energy_abs: float
    err_energy_rel: float
    err_l2: float
    runtime_ms: float

    def __post_init__(self):
        if min(self.err_energy_abs, self.err_energy_rel, self.err_l2) < 0:
            raise ValueError("errors must be non-negative")


@dataclass(frozen=True)
class RateFit:
    b: float
    C: float
    r2: float
    semilog_slope: float  # d ln(err) / dp


def fit_rate(records: Sequence[SweepRecord] | Iterable[tuple[int, float]],
             ps: Sequence[int] | None = None) -> RateFit:
    """Least-squares fit of ``ln err = ln C + 2 ln N - b sqrt(N)``.

    Accepts :class:`SweepRecord` objects or ``(N, err)`` pairs (``ps`` then
    optionally supplies degrees for the semilog slope). ``r2`` is the
    coefficient of determination of ``ln(err / N^2)`` against ``sqrt(N)``.
    """
    records = list(records)
    if records and isinstance(records[0], SweepRecord):
        N = np.array([rec.N for rec in records], dtype=float)
        err = np.array([rec.err_energy_rel for rec in records], dtype=float)
        ps = [rec.p for rec in records]
    else:
        N = np.array([n for n, _ in records], dtype=float)
        err = np.array([e for _, e in records], dtype=float)
    if len(N) < 3 or len(np.unique(N)) < 3:
        raise ValueError("need at least 3 records with distinct N")
    if np.any(err <= 0):
        raise ValueError("errors must be positive")
    x = np.sqrt(N)
    y = np.log(err) - 2.0 * np.log(N)
    A = np.stack([np.ones_like(x), -x], axis=1)
    (lnC, b), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ np.array([lnC, b])
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    slope = float("nan")
    if ps is not None and len(set(ps)) > 1:
        slope = float(np.polyfit(np.asarray(ps, dtype=float), np.log(err), 1)[0])
    return RateFit(float(b), float(math.exp(lnC)), r2, slope)


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        row = asdict(rec)
        writer.writerow([
            format(row[k], ".17g") if isinstance(row[k], float) else row[k]
            for k in CSV_FIELDS
        ])
    return buf.getvalue()


def records_to_json(records: Sequence[SweepRecord]) -> str:
    return dumps_17([{k: asdict(rec)[k] for k in CSV_FIELDS} for rec in records])
