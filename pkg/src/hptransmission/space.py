"""Conforming Gauss-Lobatto Q_p space on a :class:`LayerMesh`.

Global numbering uses the structured (radius, angle) node grid directly:
coincident nodes are identified by index arithmetic, never by comparing
floating point coordinates (needle elements can be a few 1e-6 wide).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mesh import LayerMesh, element_map
from .quadrature import nodal_basis


@dataclass(frozen=True, eq=False)
class FeSpace:
    mesh: LayerMesh
    p: int
    n_grid: int
    local_to_global: np.ndarray  # (n_elements, (p+1)**2), grid numbering
    dirichlet: np.ndarray  # bool per grid DOF
    free_index: np.ndarray  # grid DOF -> free DOF, -1 on Dirichlet DOFs
    r: np.ndarray  # radius of each grid DOF
    theta: np.ndarray  # angle of each grid DOF

    @property
    def N(self) -> int:
        """Dimension of the discrete space (free DOFs)."""
        return int(np.count_nonzero(~self.dirichlet))

    @property
    def free(self) -> np.ndarray:
        return np.flatnonzero(~self.dirichlet)

    @property
    def coords(self) -> np.ndarray:
        return np.stack([self.r * np.cos(self.theta), self.r * np.sin(self.theta)], axis=1)

    def interpolate(self, fn) -> np.ndarray:
        """Nodal interpolant of ``fn(x, y)`` on the full grid."""
        xy = self.coords
        return np.asarray(fn(xy[:, 0], xy[:, 1]), dtype=float) * np.ones(self.n_grid)

    def restrict(self, full: np.ndarray) -> np.ndarray:
        return np.asarray(full)[~self.dirichlet]

    def extend(self, coeffs: np.ndarray) -> np.ndarray:
        full = np.zeros(self.n_grid)
        full[~self.dirichlet] = coeffs
        return full


def build_space(mesh: LayerMesh, p: int | None = None) -> FeSpace:
    """Global numbering with edge sharing, angular periodicity and interface
    conformity, plus the homogeneous Dirichlet mask on ``r = a`` and ``r = c``.
    """
    p = mesh.p if p is None else p
    if p < 1:
        raise ValueError(f"degree must be at least 1, got p={p}")
    K, m = mesh.n_radial, mesh.m
    n_r = K * p + 1
    n_t = m * p if mesh.periodic else m * p + 1
    n_grid = n_r * n_t

    lr, lt = np.meshgrid(np.arange(p + 1), np.arange(p + 1), indexing="ij")
    lr, lt = lr.ravel(), lt.ravel()
    l2g = np.empty((K * m, (p + 1) ** 2), dtype=np.int64)
    for e, elem in enumerate(mesh.elements):
        gr = elem.ir * p + lr
        gt = elem.it * p + lt
        if mesh.periodic:
            gt = gt % n_t
        l2g[e] = gr * n_t + gt

    nodes = nodal_basis(p).nodes
    r_nodes = np.empty(n_r)
    for i in range(K):
        r0, r1 = mesh.radial[i], mesh.radial[i + 1]
        r_nodes[i * p: (i + 1) * p + 1] = r0 + 0.5 * (r1 - r0) * (nodes + 1.0)
    r_nodes[::p] = mesh.radial
    t_nodes = np.empty(m * p + 1)
    for j in range(m):
        t0, t1 = mesh.angular[j], mesh.angular[j + 1]
        t_nodes[j * p: (j + 1) * p + 1] = t0 + 0.5 * (t1 - t0) * (nodes + 1.0)
    t_nodes[::p] = mesh.angular
    t_nodes = t_nodes[:n_t]

    ir_all = np.repeat(np.arange(n_r), n_t)
    dirichlet = (ir_all == 0) | (ir_all == n_r - 1)
    free_index = np.full(n_grid, -1, dtype=np.int64)
    free_index[~dirichlet] = np.arange(np.count_nonzero(~dirichlet))
    for arr in (l2g, dirichlet, free_index):
        arr.setflags(write=False)
    return FeSpace(
        mesh=mesh,
        p=p,
        n_grid=n_grid,
        local_to_global=l2g,
        dirichlet=dirichlet,
        free_index=free_index,
        r=r_nodes[ir_all],
        theta=np.tile(t_nodes, n_r),
    )


@dataclass(frozen=True, eq=False)
class DiscreteField:
    """Member of the discrete space, stored on the full node grid.

    Build from free coefficients with :meth:`from_free` (Dirichlet values are
    then zero); :meth:`from_full` accepts arbitrary grid values for
    diagnostics that ignore the boundary conditions.
    """

    space: FeSpace
    values: np.ndarray = field(repr=False)

    @classmethod
    def from_free(cls, space: FeSpace, coeffs) -> "DiscreteField":
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (space.N,):
            raise ValueError(f"expected {space.N} coefficients, got {coeffs.shape}")
        return cls(space, space.extend(coeffs))

    @classmethod
    def from_full(cls, space: FeSpace, values) -> "DiscreteField":
        values = np.asarray(values, dtype=float)
        if values.shape != (space.n_grid,):
            raise ValueError(f"expected {space.n_grid} grid values, got {values.shape}")
        return cls(space, values.copy())

    @property
    def coefficients(self) -> np.ndarray:
        return self.space.restrict(self.values)

    def local(self, elem_id: int) -> np.ndarray:
        return self.values[self.space.local_to_global[elem_id]].reshape(
            self.space.p + 1, self.space.p + 1
        )


def eval_field(field: DiscreteField, elem_id: int, xi, eta):
    """Value and physical (x, y) gradient at reference points of an element."""
    space = field.space
    if not (0 <= elem_id < len(space.mesh.elements)):
        raise IndexError(f"invalid element id {elem_id}")
    elem = space.mesh.elements[elem_id]
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    basis = nodal_basis(space.p)
    vx, dx = basis.tables(xi)
    vy, dy = basis.tables(eta)
    u = field.local(elem_id)
    val = np.einsum("qi,ij,qj->q", vx, u, vy)
    d_xi = np.einsum("qi,ij,qj->q", dx, u, vy)
    d_eta = np.einsum("qi,ij,qj->q", vx, u, dy)
    _, jac, _ = element_map(elem, xi, eta)
    ref = np.stack([d_xi, d_eta], axis=-1)
    # grad_x = J^{-T} grad_ref
    grad = np.linalg.solve(np.swapaxes(jac, -1, -2), ref[..., None])[..., 0]
    return val, grad
