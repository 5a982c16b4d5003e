"""Exponentially scaled modified Bessel functions of orders 0 and 1."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special


@dataclass(frozen=True, eq=False)
class ScaledBessel:
    """``I0s = e^-x I0(x)``, ``I1s = e^-x I1(x)``, ``K0s = e^x K0(x)``, ``K1s = e^x K1(x)``."""

    x: np.ndarray
    I0s: np.ndarray
    I1s: np.ndarray
    K0s: np.ndarray
    K1s: np.ndarray

    def wronskian(self) -> np.ndarray:
        """``I0 K1 + I1 K0``, which equals ``1/x``."""
        return self.I0s * self.K1s + self.I1s * self.K0s


def bessel_scaled(x) -> ScaledBessel:
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("Bessel argument must be positive")
    return ScaledBessel(x, special.i0e(x), special.i1e(x), special.k0e(x), special.k1e(x))
