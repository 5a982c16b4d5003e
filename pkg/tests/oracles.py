"""Independent reference solvers used to pin expected values.

Nothing here touches Bessel functions: the radial ODE
``-w (u'' + u'/r) + u = f`` is integrated numerically.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

RTOL = 1e-13
ATOL = 1e-14


def _riccati(eps, direction):
    # z = u'/u for the homogeneous equation u'' = u/eps^2 - u'/r
    def rhs(r, z):
        return [1.0 / eps**2 - z[0] / r - z[0] ** 2]

    return rhs


def _log_mode(eps, start, stop, z0):
    """Homogeneous mode normalized to 1 at ``start``: returns ``(L, z)`` dense
    callables with ``u = exp(L)``, ``u'/u = z``."""

    def rhs(r, y):
        z = y[0]
        return [1.0 / eps**2 - z / r - z * z, z]

    sol = integrate.solve_ivp(rhs, (start, stop), [z0, 0.0], method="Radau",
                              rtol=RTOL, atol=ATOL, dense_output=True)
    assert sol.success, sol.message

    def at(r):
        y = sol.sol(np.asarray(r, dtype=float))
        return y[1], y[0]

    return at


def _linear_mode(start, stop, u0, du0):
    def rhs(r, y):
        return [y[1], y[0] - y[1] / r]

    sol = integrate.solve_ivp(rhs, (start, stop), [u0, du0], method="DOP853",
                              rtol=RTOL, atol=ATOL, dense_output=True)
    assert sol.success, sol.message
    return lambda r: sol.sol(np.asarray(r, dtype=float))


class ShootingSolution:
    """Constant-data transmission problem solved by shooting + matching at b.

    Plus side: ``u = f + alpha * g1 + beta * g2`` with ``g1`` growing
    outward from ``a`` and ``g2`` growing inward from ``b``, each integrated
    in the direction it grows (Riccati form, stable for small eps). Minus
    side: ``u = f + gamma * g3 - f * g4`` with ``g3(c) = 0, g3'(c) = 1``
    and ``g4(c) = 1, g4'(c) = 0``.
    """

    def __init__(self, a, b, c, eps, f=1.0, h=0.0):
        self.a, self.b, self.c, self.eps, self.f = a, b, c, eps, f
        self.g1 = _log_mode(eps, a, b, 1.0 / eps)
        # integrate inward: substitute s = -r is avoided by integrating b -> a
        self.g2 = _log_mode(eps, b, a, -1.0 / eps)
        self.g3 = _linear_mode(c, b, 0.0, 1.0)
        self.g4 = _linear_mode(c, b, 1.0, 0.0)
        L1b, z1b = self.g1(b)
        L2a, z2a = self.g2(a)
        _, z2b = self.g2(b)
        self.L1b, self.L2a = float(L1b), float(L2a)
        # unknowns: A = alpha * g1(b), B = beta * g2(a), gamma
        e1 = math.exp(-self.L1b)  # g1(a)/g1(b)
        e2 = math.exp(-self.L2a)  # g2(b)/g2(a)
        g3b, dg3b = self.g3(b)
        g4b, dg4b = self.g4(b)
        M = np.array([
            [e1, 1.0, 0.0],
            [1.0, e2, -g3b],
            [eps**2 * float(z1b), eps**2 * float(z2b) * e2, -dg3b],
        ])
        rhs = np.array([-f, (f - f * g4b) - f, h - f * dg4b])
        self.A, self.B, self.gamma = np.linalg.solve(M, rhs)

    def __call__(self, r):
        r = float(r)
        if r <= self.b:
            L1, _ = self.g1(r)
            L2, _ = self.g2(r)
            return self.f + self.A * math.exp(float(L1) - self.L1b) + self.B * math.exp(
                float(L2) - self.L2a)
        g3, _ = self.g3(r)
        g4, _ = self.g4(r)
        return self.f + self.gamma * float(g3) - self.f * float(g4)


def limit_shooting(b, c, f=1.0, h=0.0):
    """Value function of ``-(u'' + u'/r) + u = f``, ``u(c) = 0``, ``u'(b) = -h``."""
    g3 = _linear_mode(c, b, 0.0, 1.0)
    g4 = _linear_mode(c, b, 1.0, 0.0)
    _, dg3b = g3(b)
    _, dg4b = g4(b)
    gamma = (-h + f * dg4b) / dg3b

    def u(r):
        v3, _ = g3(r)
        v4, _ = g4(r)
        return f + gamma * float(v3) - f * float(v4)

    return u


def bessel_i0_series(x, terms=30):
    return sum((x * x / 4.0) ** k / math.factorial(k) ** 2 for k in range(terms))


def bessel_k0_integral(x):
    val, _ = integrate.quad(lambda t: math.exp(-x * math.cosh(t)), 0.0, 20.0,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return val
