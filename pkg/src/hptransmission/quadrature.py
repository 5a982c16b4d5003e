"""One-dimensional quadrature rules and Gauss-Lobatto nodal bases.

Everything lives on the reference interval ``[-1, 1]``; the tensor-product
interpolant works on ``[-1, 1]^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre


@dataclass(frozen=True, eq=False)
class QuadRule:
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.nodes)

    def integrate(self, fn) -> float:
        return float(np.dot(self.weights, fn(self.nodes)))


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> QuadRule:
    """n-point Gauss-Legendre rule, exact for degree ``2n - 1``."""
    if n < 1:
        raise ValueError(f"need at least one point, got n={n}")
    x, w = legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadRule(x, w)


def _legendre_and_derivatives(p: int, x):
    """Return ``P_p(x), P_p'(x), P_p''(x)`` by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if p == 0:
        return p0, np.zeros_like(x), np.zeros_like(x)
    p1 = x.copy()
    for k in range(2, p + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    # p1 = P_p, p0 = P_{p-1}
    one_m_x2 = 1.0 - x * x
    dp = p * (p0 - x * p1) / one_m_x2
    d2p = (2 * x * dp - p * (p + 1) * p1) / one_m_x2
    return p1, dp, d2p


def _lobatto_interior(p: int, tol: float = 1e-15, maxiter: int = 100) -> np.ndarray:
    """Roots of ``P_p'`` in ``(-1, 1)``, ascending."""
    k = np.arange(1, p)
    # Chebyshev-Gauss-Lobatto points as initial guesses
    x = -np.cos(math.pi * k / p)
    lo = np.empty(p - 1)
    hi = np.empty(p - 1)
    # brackets: interior Lobatto nodes interlace with the Chebyshev midpoints
    mids = -np.cos(math.pi * (np.arange(0, p) + 0.5) / p)
    lo[:] = mids[:-1]
    hi[:] = mids[1:]
    for _ in range(maxiter):
        _, dp, d2p = _legendre_and_derivatives(p, x)
        step = dp / d2p
        x_new = x - step
        # damp: stay inside the bracket, fall back to bisection otherwise
        outside = (x_new <= lo) | (x_new >= hi)
        x_new[outside] = 0.5 * (lo[outside] + hi[outside])
        _, dp_new, _ = _legendre_and_derivatives(p, x_new)
        _, dp_lo, _ = _legendre_and_derivatives(p, lo)
        same = np.sign(dp_new) == np.sign(dp_lo)
        lo = np.where(same, x_new, lo)
        hi = np.where(same, hi, x_new)
        done = np.max(np.abs(x_new - x)) <= tol
        x = x_new
        if done or np.all(np.abs(dp_new) <= tol):
            break
    return x


@lru_cache(maxsize=None)
def gauss_lobatto(p: int) -> QuadRule:
    """Gauss-Lobatto rule with ``p + 1`` points, exact for degree ``2p - 1``."""
    if p < 1:
        raise ValueError(f"degree must be at least 1, got p={p}")
    x = np.empty(p + 1)
    x[0], x[-1] = -1.0, 1.0
    if p > 1:
        inner = _lobatto_interior(p)
        # enforce exact symmetry
        inner = 0.5 * (inner - inner[::-1])
        x[1:-1] = inner
    pp, _, _ = _legendre_and_derivatives(p, x[1:-1])
    w = np.empty(p + 1)
    w[0] = w[-1] = 2.0 / (p * (p + 1))
    w[1:-1] = 2.0 / (p * (p + 1) * pp**2)
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadRule(x, w)


class NodalBasis1D:
    """Lagrange basis on the ``p + 1`` Gauss-Lobatto points.

    Values use the barycentric formula; derivatives go through the nodal
    differentiation matrix, which is stable at the nodes themselves.
    """

    def __init__(self, p: int):
        self.degree = p
        self.nodes = np.array(gauss_lobatto(p).nodes)
        x = self.nodes
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        self.bary = 1.0 / np.prod(diff, axis=1)
        D = (self.bary[None, :] / self.bary[:, None]) / diff
        np.fill_diagonal(D, 0.0)
        np.fill_diagonal(D, -D.sum(axis=1))
        self.diff_matrix = D

    def values(self, xq) -> np.ndarray:
        """Basis values, shape ``(len(xq), p + 1)``."""
        xq = np.atleast_1d(np.asarray(xq, dtype=float))
        d = xq[:, None] - self.nodes[None, :]
        exact = d == 0.0
        d[exact] = 1.0
        t = self.bary[None, :] / d
        out = t / t.sum(axis=1, keepdims=True)
        hit = exact.any(axis=1)
        out[hit] = exact[hit].astype(float)
        return out

    def derivatives(self, xq) -> np.ndarray:
        """Basis first derivatives, shape ``(len(xq), p + 1)``."""
        return self.values(xq) @ self.diff_matrix

    def tables(self, xq) -> tuple[np.ndarray, np.ndarray]:
        v = self.values(xq)
        return v, v @ self.diff_matrix


@lru_cache(maxsize=None)
def nodal_basis(p: int) -> NodalBasis1D:
    return NodalBasis1D(p)


def interpolate_gl(values, p: int, query) -> float | np.ndarray:
    """Evaluate the tensor Gauss-Lobatto interpolant on ``[-1, 1]^2``.

    ``values[i, j]`` is the datum at ``(x_i, y_j)``; a flat array of length
    ``(p + 1)**2`` is read in the same (row-major) order. ``query`` is one
    point or an ``(n, 2)`` array.
    """
    values = np.asarray(values, dtype=float)
    if values.size != (p + 1) ** 2:
        raise ValueError(
            f"expected {(p + 1) ** 2} grid values for p={p}, got {values.size}"
        )
    values = values.reshape(p + 1, p + 1)
    q = np.asarray(query, dtype=float)
    single = q.ndim == 1
    q = np.atleast_2d(q)
    basis = nodal_basis(p)
    lx = basis.values(q[:, 0])
    ly = basis.values(q[:, 1])
    out = np.einsum("qi,ij,qj->q", lx, values, ly)
    return float(out[0]) if single else out
