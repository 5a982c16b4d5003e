"""Closed-form radial solutions used as error oracles.

For constant data the radial reduction ``-e^2 (u'' + u'/r) + u = f`` is
solved by ``f + A I0(r/e) + B K0(r/e)``. In the plus annulus the
coefficients are stored relative to ``e^{b/e}`` and ``e^{-a/e}`` so that
only the non-positive exponents ``(r - b)/e`` and ``(a - r)/e`` are ever
evaluated; the solution stays finite for ``e`` down to 1e-8 and below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bessel import bessel_scaled
from .geometry import AnnularGeometry
from .problem import TransmissionProblem

CONDITION_TOL = 1e-10


class OracleError(RuntimeError):
    pass


def _modes(r, scale, left, right):
    """Scaled growing/decaying modes and derivatives on ``[left, right]``.

    Returns ``gi, gi', gk, gk'`` with ``gi = I0(r/s) e^{(r-right)/s}``-type
    normalization, i.e. ``I0s(r/s) e^{(r - right)/s}`` and
    ``K0s(r/s) e^{(left - r)/s}``; derivatives are with respect to ``r``.
    """
    r = np.asarray(r, dtype=float)
    bs = bessel_scaled(r / scale)
    ei = np.exp((r - right) / scale)
    ek = np.exp((left - r) / scale)
    return (
        bs.I0s * ei,
        bs.I1s * ei / scale,
        bs.K0s * ek,
        -bs.K1s * ek / scale,
    )


@dataclass(frozen=True)
class RadialExact:
    """Exact radial solution for constant ``f+``, ``f-`` and ``h``.

    ``u+(r) = f+ + P I0s(r/e) e^{(r-b)/e} + Q K0s(r/e) e^{(a-r)/e}``,
    ``u-(r) = f- + C I0s(r) e^{r-c} + D K0s(r) e^{b-r}``.
    """

    geometry: AnnularGeometry
    eps: float
    f_plus: float
    f_minus: float
    h: float
    h_sign: int
    coeffs: tuple[float, float, float, float]

    def __call__(self, r):
        return eval_exact(self, r)

    def plus(self, r):
        a, b, _ = self.geometry.radii
        gi, dgi, gk, dgk = _modes(r, self.eps, a, b)
        P, Q, _, _ = self.coeffs
        return self.f_plus + P * gi + Q * gk, P * dgi + Q * dgk

    def minus(self, r):
        _, b, c = self.geometry.radii
        gi, dgi, gk, dgk = _modes(r, 1.0, b, c)
        _, _, C, D = self.coeffs
        return self.f_minus + C * gi + D * gk, C * dgi + D * dgk

    def residuals(self) -> dict[str, float]:
        """Defects in the two Dirichlet, continuity and flux conditions."""
        a, b, c = self.geometry.radii
        ua, _ = self.plus(a)
        uc, _ = self.minus(c)
        upb, dupb = self.plus(b)
        umb, dumb = self.minus(b)
        return {
            "dirichlet_a": float(ua),
            "dirichlet_c": float(uc),
            "continuity": float(upb - umb),
            "flux": float(self.eps**2 * dupb - dumb - self.h_sign * self.h),
        }


def radial_exact(
    geom: AnnularGeometry,
    eps: float,
    f_const: float = 1.0,
    h_const: float = 0.0,
    h_sign: int = 1,
    f_minus: float | None = None,
) -> RadialExact:
    """Solve the four interface/boundary conditions for the Bessel coefficients.

    The flux condition is ``eps^2 u+'(b) - u-'(b) = h_sign * h_const``.
    """
    if not (0 < eps <= 1):
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    a, b, c = geom.radii
    fp = float(f_const)
    fm = fp if f_minus is None else float(f_minus)

    ia, _, ka, _ = _modes(a, eps, a, b)
    ib, dib, kb, dkb = _modes(b, eps, a, b)
    jb, djb, lb, dlb = _modes(b, 1.0, b, c)
    jc, _, lc, _ = _modes(c, 1.0, b, c)
    M = np.array([
        [ia, ka, 0.0, 0.0],
        [0.0, 0.0, jc, lc],
        [ib, kb, -jb, -lb],
        [eps**2 * dib, eps**2 * dkb, -djb, -dlb],
    ], dtype=float)
    rhs = np.array([-fp, -fm, fm - fp, h_sign * float(h_const)])
    try:
        coeffs = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise OracleError("singular coefficient system") from exc
    sol = RadialExact(geom, float(eps), fp, fm, float(h_const), h_sign,
                      tuple(float(v) for v in coeffs))
    scale = max(1.0, abs(fp), abs(fm), abs(h_const))
    bad = {k: v for k, v in sol.residuals().items() if abs(v) > CONDITION_TOL * scale}
    if bad:
        raise OracleError(f"transmission conditions violated: {bad}")
    return sol


def eval_exact(sol: RadialExact, r):
    """Value and radial derivative at radius ``r`` (scalar or array)."""
    a, b, c = sol.geometry.radii
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < a) or np.any(r_arr > c):
        raise ValueError(f"radius outside [{a}, {c}]")
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    u = np.empty_like(r_arr)
    du = np.empty_like(r_arr)
    plus = r_arr <= b
    if plus.any():
        u[plus], du[plus] = sol.plus(r_arr[plus])
    if (~plus).any():
        u[~plus], du[~plus] = sol.minus(r_arr[~plus])
    if scalar:
        return float(u[0]), float(du[0])
    return u, du


@dataclass(frozen=True)
class LimitSolution:
    """Formal limit as ``eps -> 0``: ``u0+ = f+`` and the minus-side solution of
    ``-(u'' + u'/r) + u = f-``, ``u(c) = 0``, ``u'(b) = -h``.
    """

    geometry: AnnularGeometry
    f_plus: float
    f_minus: float
    h: float
    coeffs: tuple[float, float]

    def minus(self, r):
        _, b, c = self.geometry.radii
        gi, dgi, gk, dgk = _modes(r, 1.0, b, c)
        C, D = self.coeffs
        return self.f_minus + C * gi + D * gk, C * dgi + D * dgk

    def plus(self, r):
        r = np.asarray(r, dtype=float)
        return np.full_like(r, self.f_plus), np.zeros_like(r)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        b = self.geometry.b
        up, dup = self.plus(r)
        um, dum = self.minus(np.clip(r, b, None))
        inside = r <= b
        return np.where(inside, up, um), np.where(inside, dup, dum)


def limit_solution(geom: AnnularGeometry, f_const: float = 1.0, h_const: float = 0.0,
                   f_minus: float | None = None) -> LimitSolution:
    _, b, c = geom.radii
    fp = float(f_const)
    fm = fp if f_minus is None else float(f_minus)
    jb, djb, lb, dlb = _modes(b, 1.0, b, c)
    jc, _, lc, _ = _modes(c, 1.0, b, c)
    M = np.array([[jc, lc], [djb, dlb]], dtype=float)
    rhs = np.array([-fm, -float(h_const)])
    C, D = np.linalg.solve(M, rhs)
    return LimitSolution(geom, fp, fm, float(h_const), (float(C), float(D)))


@dataclass(frozen=True)
class QuadraticExact:
    """``u(r) = (r - a)(c - r)`` on the whole annulus."""

    geometry: AnnularGeometry

    def __call__(self, r):
        a, _, c = self.geometry.radii
        r = np.asarray(r, dtype=float)
        return (r - a) * (c - r), a + c - 2.0 * r


def manufactured_case(geom: AnnularGeometry, eps: float, h_sign: int = 1):
    """Smooth manufactured problem with exact solution ``(r - a)(c - r)``.

    The interface datum is chosen so that the load, with its interface
    integral signed by ``h_sign``, reproduces the true flux jump
    ``(eps^2 - 1)(a + c - 2b)``.
    """
    a, b, c = geom.radii
    exact = QuadraticExact(geom)

    def source(weight):
        def fn(x, y):
            r = np.hypot(x, y)
            u = (r - a) * (c - r)
            du = a + c - 2.0 * r
            return -weight * (-2.0 + du / r) + u

        return fn

    jump = (eps**2 - 1.0) * (a + c - 2.0 * b)

    def h(x, y):
        return np.full(np.broadcast(x, y).shape, h_sign * jump)

    problem = TransmissionProblem(geom, eps, source(eps**2), source(1.0), h, h_sign, "manufactured")
    return problem, exact
