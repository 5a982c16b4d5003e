"""Assembly of the weighted stiffness + mass system and its SPD solve.

Integrals are computed in polar coordinates, ``dx = r dr dtheta`` and
``grad u . grad v = u_r v_r + u_t v_t / r^2``. Because the element map is a
tensor product of affine maps in ``r`` and ``theta``, every element matrix
is a sum of Kronecker products of 1D matrices and depends only on the
radial band; only the load needs per-element work.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .mesh import MINUS, PLUS
from .problem import TransmissionProblem
from .quadrature import gauss_legendre, nodal_basis
from .space import FeSpace

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10


class FactorizationError(RuntimeError):
    """Non-positive pivot: the assembled matrix is not positive definite."""

    def __init__(self, pivot: int, value: float):
        super().__init__(f"non-positive pivot {value:.3e} at index {pivot}")
        self.pivot = pivot
        self.value = value


@dataclass(frozen=True, eq=False)
class FullSystem:
    """Matrices on every grid DOF, boundary conditions not applied."""

    stiffness: sp.csr_matrix
    mass: sp.csr_matrix
    load: np.ndarray


@dataclass(frozen=True, eq=False)
class SparseSystem:
    matrix: sp.csr_matrix
    rhs: np.ndarray

    @property
    def N(self) -> int:
        return self.matrix.shape[0]


def region_weights(space: FeSpace, eps: float) -> np.ndarray:
    """Diffusion weight per element: ``eps^2`` in the plus region, 1 otherwise."""
    return np.array([eps**2 if e.region == PLUS else 1.0 for e in space.mesh.elements])


def _band_matrices(space: FeSpace, quad_order: int):
    """Per radial band: (stiffness-r, stiffness-theta, mass) local matrices,
    unweighted and before the diffusion weight is applied."""
    p = space.p
    rule = gauss_legendre(quad_order)
    basis = nodal_basis(p)
    v, d = basis.tables(rule.nodes)
    w = rule.weights
    out = []
    for i in range(space.mesh.n_radial):
        r0, r1 = space.mesh.radial[i], space.mesh.radial[i + 1]
        hr = 0.5 * (r1 - r0)
        rq = r0 + hr * (rule.nodes + 1.0)
        a_d = (d.T * (w * rq)) @ d / hr  # int l_i' l_k' r dr
        a_m = (v.T * (w * rq)) @ v * hr  # int l_i l_k r dr
        a_inv = (v.T * (w / rq)) @ v * hr  # int l_i l_k / r dr
        out.append((a_d, a_m, a_inv))
    return out


def _angular_matrices(dt: float, p: int, quad_order: int):
    rule = gauss_legendre(quad_order)
    v, d = nodal_basis(p).tables(rule.nodes)
    w = rule.weights
    ht = 0.5 * dt
    b_m = (v.T * w) @ v * ht
    b_d = (d.T * w) @ d / ht
    return b_m, b_d


def _scatter(space: FeSpace, local: np.ndarray) -> sp.csr_matrix:
    l2g = space.local_to_global
    n_loc = l2g.shape[1]
    rows = np.repeat(l2g, n_loc, axis=1).ravel()
    cols = np.tile(l2g, (1, n_loc)).ravel()
    return sp.coo_matrix(
        (local.ravel(), (rows, cols)), shape=(space.n_grid, space.n_grid)
    ).tocsr()


def _check_order(space: FeSpace, quad_order: int):
    if quad_order < space.p + 1:
        raise ValueError(
            f"quadrature order {quad_order} below p + 1 = {space.p + 1}"
        )


def assemble_full(
    space: FeSpace,
    problem: TransmissionProblem,
    quad_order: int | None = None,
) -> FullSystem:
    """Weighted stiffness, mass and load on the full grid."""
    quad_order = space.p + 2 if quad_order is None else quad_order
    _check_order(space, quad_order)
    mesh, p = space.mesh, space.p
    weights = region_weights(space, problem.eps)
    bands = _band_matrices(space, quad_order)
    n_loc = (p + 1) ** 2

    stiff = np.empty((len(mesh.elements), n_loc, n_loc))
    mass = np.empty_like(stiff)
    ang_cache = {}
    for e, elem in enumerate(mesh.elements):
        key = round(elem.dt, 14)
        if key not in ang_cache:
            ang_cache[key] = _angular_matrices(elem.dt, p, quad_order)
        b_m, b_d = ang_cache[key]
        a_d, a_m, a_inv = bands[elem.ir]
        stiff[e] = weights[e] * (np.kron(a_d, b_m) + np.kron(a_inv, b_d))
        mass[e] = np.kron(a_m, b_m)

    load = element_loads(space, problem, quad_order)
    return FullSystem(_scatter(space, stiff), _scatter(space, mass), load)


def element_loads(space: FeSpace, problem: TransmissionProblem, quad_order: int) -> np.ndarray:
    """Load vector on the full grid: volume sources plus the interface term.

    The interface integral is taken over minus-side element edges on
    ``r = b`` and carries the sign ``problem.h_sign``.
    """
    mesh, p = space.mesh, space.p
    rule = gauss_legendre(quad_order)
    v = nodal_basis(p).values(rule.nodes)
    w = rule.weights
    b = mesh.geometry.b
    load = np.zeros(space.n_grid)
    for e, elem in enumerate(mesh.elements):
        hr, ht = 0.5 * elem.dr, 0.5 * elem.dt
        rq = elem.r0 + hr * (rule.nodes + 1.0)
        tq = elem.t0 + ht * (rule.nodes + 1.0)
        R, T = np.meshgrid(rq, tq, indexing="ij")
        f = problem.f_plus if elem.region == PLUS else problem.f_minus
        fq = f(R * np.cos(T), R * np.sin(T))
        wq = np.outer(w * rq * hr, w * ht)
        local = v.T @ (fq * wq) @ v
        if elem.region == MINUS and abs(elem.r0 - b) <= 1e-12 * b:
            hq = problem.h(b * np.cos(tq), b * np.sin(tq))
            # only the xi = -1 row of nodes lives on the interface
            local[0] += problem.h_sign * (v.T @ (hq * w * b * ht))
        np.add.at(load, space.local_to_global[e], local.ravel())
    return load


def assemble(
    space: FeSpace,
    problem: TransmissionProblem,
    quad_order: int | None = None,
) -> SparseSystem:
    """Discrete system on the free DOFs (homogeneous Dirichlet rows and
    columns removed)."""
    full = assemble_full(space, problem, quad_order)
    free = space.free
    A = (full.stiffness + full.mass)[free][:, free].tocsr()
    return SparseSystem(A, full.load[free].copy())


def solve_spd(system: SparseSystem) -> np.ndarray:
    """Sparse direct solve with a symmetric ordering and no pivoting.

    With matching row and column permutations the LU factors are an LDL^T
    factorization, so a non-positive diagonal of ``U`` exposes a loss of
    positive definiteness. Falls back to conjugate gradients if the direct
    residual misses ``RESIDUAL_TOL``.
    """
    A = sp.csc_matrix(system.matrix)
    b = np.asarray(system.rhs, dtype=float)
    if A.shape[0] == 0:
        return np.zeros(0)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros_like(b)
    lu = spla.splu(
        A,
        permc_spec="MMD_AT_PLUS_A",
        diag_pivot_thresh=0.0,
        options={"SymmetricMode": True},
    )
    if np.array_equal(lu.perm_r, lu.perm_c):
        diag = lu.U.diagonal()
        bad = np.flatnonzero(diag <= 0)
        if bad.size:
            k = int(bad[0])
            raise FactorizationError(int(np.flatnonzero(lu.perm_c == k)[0]), float(diag[k]))
    x = lu.solve(b)
    res = np.linalg.norm(A @ x - b) / bnorm
    for _ in range(3):
        if res <= RESIDUAL_TOL:
            break
        x += lu.solve(b - A @ x)
        res = np.linalg.norm(A @ x - b) / bnorm
    if res > RESIDUAL_TOL:
        log.warning("direct residual %.2e, falling back to CG", res)
        dinv = 1.0 / A.diagonal()
        M = spla.LinearOperator(A.shape, matvec=lambda y: dinv * y)
        x, info = spla.cg(A, b, x0=x, rtol=RESIDUAL_TOL * 0.1, atol=0.0,
                          maxiter=20 * A.shape[0], M=M)
        res = np.linalg.norm(A @ x - b) / bnorm
        if res > RESIDUAL_TOL:
            raise RuntimeError(f"solver residual {res:.2e} above {RESIDUAL_TOL:.0e}")
    return x
