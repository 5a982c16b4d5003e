"""Problem data for the transmission problem.

    -eps^2 Lap u+ + u+ = f+   in the plus annulus  a < r < b
    -Lap u-  + u-  = f-        in the minus annulus b < r < c
    u+ = 0 on r = a,  u- = 0 on r = c,  u+ = u- on r = b
    eps^2 du+/dr - du-/dr = h  on r = b

Source terms are callables ``f(x, y)`` evaluated at quadrature points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import AnnularGeometry

Data = Callable[[np.ndarray, np.ndarray], np.ndarray]


def constant(value: float) -> Data:
    def fn(x, y):
        return np.full(np.broadcast(x, y).shape, float(value))

    fn.value = float(value)
    return fn


@dataclass(frozen=True)
class TransmissionProblem:
    geometry: AnnularGeometry
    eps: float
    f_plus: Data
    f_minus: Data
    h: Data
    # sign of the interface integral in the load; +1 reproduces the
    # weak form obtained by integrating the strong form by parts
    h_sign: int = 1
    case: str = "const"

    def __post_init__(self):
        if not (0 < self.eps <= 1):
            raise ValueError(f"eps must lie in (0, 1], got {self.eps}")
        if self.h_sign not in (1, -1):
            raise ValueError("h_sign must be +1 or -1")

    def scaled(self, s: float) -> "TransmissionProblem":
        """Same problem with every datum multiplied by ``s``."""
        fp, fm, h = self.f_plus, self.f_minus, self.h
        return TransmissionProblem(
            self.geometry, self.eps,
            lambda x, y: s * fp(x, y),
            lambda x, y: s * fm(x, y),
            lambda x, y: s * h(x, y),
            self.h_sign, self.case,
        )


def constant_problem(
    geom: AnnularGeometry,
    eps: float,
    f: float = 1.0,
    h: float = 0.0,
    h_sign: int = 1,
) -> TransmissionProblem:
    """Constant sources ``f+ = f- = f`` and constant interface flux ``h``."""
    return TransmissionProblem(geom, eps, constant(f), constant(f), constant(h), h_sign, "const")
