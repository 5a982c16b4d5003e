"""Leading-order asymptotic decomposition of the radial benchmark.

Plus region:  f+ + chi_BL g_bl e^{-(r-a)/eps} + chi_IL g_il e^{-(b-r)/eps}
Minus region: u0- + chi_IL V0-

with ``u0-`` the limit (Dirichlet-Neumann) solution, ``g_bl = -f+`` and
``g_il = V0-(b) - (f+ - u0-(b))``. The difference to the exact solution is
expected to be O(eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import LimitSolution, RadialExact, _modes, limit_solution
from .geometry import AnnularGeometry


def smooth_step(t):
    """C-infinity step: 1 for ``t <= 0``, 0 for ``t >= 1``."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        g0 = np.where(t < 1.0, np.exp(-1.0 / np.where(t < 1.0, 1.0 - t, 1.0)), 0.0)
        g1 = np.where(t > 0.0, np.exp(-1.0 / np.where(t > 0.0, t, 1.0)), 0.0)
    return g0 / (g0 + g1)


def cutoff(dist, rho_inner: float, rho_outer: float):
    """1 up to ``rho_inner``, 0 beyond ``(rho_inner + rho_outer)/2``."""
    stop = 0.5 * (rho_inner + rho_outer)
    return smooth_step((np.asarray(dist, dtype=float) - rho_inner) / (stop - rho_inner))


@dataclass(frozen=True)
class CompositeApprox:
    geometry: AnnularGeometry
    eps: float
    f_plus: float
    f_minus: float
    h: float
    limit: LimitSolution
    g_bl: float
    g_il: float
    v0_coeffs: tuple[float, float]  # V0- = C I0s(r) e^{r-c} + D K0s(r) e^{b-r}
    rho0: float
    rho_sigma: float
    rho1: float
    rho2: float

    def v0_minus(self, r):
        _, b, c = self.geometry.radii
        gi, dgi, gk, dgk = _modes(r, 1.0, b, c)
        C, D = self.v0_coeffs
        return C * gi + D * gk, C * dgi + D * dgk

    def __call__(self, r):
        """Composite value at radii ``r`` in ``[a, c]``."""
        a, b, c = self.geometry.radii
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        plus = r <= b
        rp = r[plus]
        chi_bl = cutoff(rp - a, self.rho1, self.rho0)
        chi_il = cutoff(b - rp, self.rho2, self.rho_sigma)
        out[plus] = (
            self.f_plus
            + chi_bl * self.g_bl * np.exp(-(rp - a) / self.eps)
            + chi_il * self.g_il * np.exp(-(b - rp) / self.eps)
        )
        rm = r[~plus]
        u0, _ = self.limit.minus(rm)
        v0, _ = self.v0_minus(rm)
        out[~plus] = u0 + cutoff(rm - b, self.rho2, self.rho_sigma) * v0
        return out


def build_composite(
    geom: AnnularGeometry,
    eps: float,
    f_const: float = 1.0,
    h_const: float = 0.0,
    orientation: int | None = None,
    rho0: float | None = None,
    rho_sigma: float | None = None,
) -> CompositeApprox:
    """Assemble the M = 0 composite for constant data.

    The Neumann datum of the minus-side interface corrector is
    ``V0-'(b) = u0-'(b) + h`` by default, which keeps the total flux of
    ``u0- + V0-`` equal to the limit flux ``-h``. ``orientation=+1/-1``
    instead imposes ``V0-'(b) = orientation * u0-'(b)``; both agree with
    the default when ``h = 0``.
    """
    if not (0 < eps <= 1):
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    _, b, c = geom.radii
    rho0 = geom.default_rho0() if rho0 is None else rho0
    rho_sigma = geom.default_rho_sigma() if rho_sigma is None else rho_sigma
    lim = limit_solution(geom, f_const, h_const)
    _, du0b = lim.minus(b)
    if orientation is None:
        # u0-'(b) = -h by construction, so the datum vanishes identically
        datum = 0.0
    elif orientation in (1, -1):
        datum = orientation * float(du0b)
    else:
        raise ValueError("orientation must be None, +1 or -1")
    jb, djb, lb, dlb = _modes(b, 1.0, b, c)
    jc, _, lc, _ = _modes(c, 1.0, b, c)
    if datum == 0.0:
        v0 = (0.0, 0.0)
    else:
        C, D = np.linalg.solve(np.array([[jc, lc], [djb, dlb]], dtype=float),
                               np.array([0.0, datum]))
        v0 = (float(C), float(D))
    u0b, _ = lim.minus(b)
    v0b = v0[0] * float(jb) + v0[1] * float(lb)
    g_il = v0b - (float(f_const) - float(u0b))
    return CompositeApprox(
        geometry=geom, eps=float(eps), f_plus=float(f_const), f_minus=float(f_const),
        h=float(h_const), limit=lim, g_bl=-float(f_const), g_il=float(g_il),
        v0_coeffs=v0, rho0=rho0, rho_sigma=rho_sigma, rho1=0.5 * rho0,
        rho2=0.5 * rho_sigma,
    )


def sample_radii(geom: AnnularGeometry, eps: float, samples: int) -> np.ndarray:
    """Uniform radii plus points clustered geometrically into both layers."""
    a, b, c = geom.radii
    n_uni = max(samples // 2, 2)
    n_lay = max((samples - n_uni) // 2, 1)
    depth = eps * np.logspace(-3, math.log10(max((b - a) / (2 * eps), 1.0)), n_lay)
    depth = depth[depth < b - a]
    r = np.concatenate([np.linspace(a, c, n_uni), a + depth, b - depth, b + depth])
    return np.unique(np.clip(r, a, c))


def composite_error(comp: CompositeApprox, oracle: RadialExact, samples: int = 2000) -> float:
    """Sup of ``|composite - exact|`` over sampled radii."""
    if (comp.geometry != oracle.geometry or comp.eps != oracle.eps
            or comp.f_plus != oracle.f_plus or comp.f_minus != oracle.f_minus
            or comp.h != oracle.h):
        raise ValueError("composite and oracle describe different problems")
    r = sample_radii(comp.geometry, comp.eps, samples)
    u, _ = oracle(r)
    return float(np.max(np.abs(comp(r) - u)))
