"""Mesh -> space -> assemble -> solve -> errors for one (eps, p) pair."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .assembly import assemble, solve_spd
from .exact import manufactured_case, radial_exact
from .geometry import AnnularGeometry
from .mesh import LayerMesh, build_mesh
from .postproc import (
    SweepRecord,
    energy_inner,
    l2_norm,
    oracle_energy_norm,
    sample_field,
    sample_radial,
)
from .problem import constant_problem
from .space import DiscreteField, FeSpace, build_space


@dataclass(frozen=True)
class RunConfig:
    radii: tuple[float, float, float] = (1.0, 2.0, 3.0)
    eps: tuple[float, ...] = (0.01,)
    p: tuple[int, ...] = tuple(range(1, 9))
    kappa: float = 1.0
    sectors: int = 16
    rho0: float | None = None
    rho_sigma: float | None = None
    case: str = "const"
    f: float = 1.0
    h: float = 0.0
    h_sign: int = 1

    def __post_init__(self):
        AnnularGeometry(*self.radii)
        if not self.eps:
            raise ValueError("empty eps list")
        if not self.p:
            raise ValueError("empty p list")
        if any(not (0 < e <= 1) for e in self.eps):
            raise ValueError("every eps must lie in (0, 1]")
        if any(int(q) != q or q < 1 for q in self.p):
            raise ValueError("every p must be an integer >= 1")
        if self.case not in ("const", "manufactured"):
            raise ValueError(f"unknown case {self.case!r}")
        if self.sectors < 4:
            raise ValueError("need at least 4 sectors")
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")

    @property
    def geometry(self) -> AnnularGeometry:
        return AnnularGeometry(*self.radii)


@dataclass(frozen=True, eq=False)
class Solution:
    record: SweepRecord
    mesh: LayerMesh
    space: FeSpace
    field: DiscreteField
    exact: object


def make_problem(cfg: RunConfig, eps: float):
    geom = cfg.geometry
    if cfg.case == "manufactured":
        return manufactured_case(geom, eps, cfg.h_sign)
    problem = constant_problem(geom, eps, cfg.f, cfg.h, cfg.h_sign)
    return problem, radial_exact(geom, eps, cfg.f, cfg.h, cfg.h_sign)


def run_single(cfg: RunConfig, eps: float, p: int) -> Solution:
    geom = cfg.geometry
    mesh = build_mesh(geom, cfg.sectors, p, eps, cfg.kappa, cfg.rho0, cfg.rho_sigma)
    space = build_space(mesh, p)
    problem, exact = make_problem(cfg, eps)
    t0 = time.perf_counter()
    system = assemble(space, problem)
    coeffs = solve_spd(system)
    runtime_ms = 1e3 * (time.perf_counter() - t0)
    field = DiscreteField.from_free(space, coeffs)

    q = p + 5
    diff = sample_radial(space, exact, q, eps) - sample_field(field, q, eps)
    err = float(np.sqrt(max(energy_inner(diff, diff), 0.0)))
    norm = oracle_energy_norm(exact, *geom.radii, eps)
    rel = err / norm if norm > 0 else (0.0 if err == 0 else float("inf"))
    rec = SweepRecord(float(eps), int(p), space.N, err, rel, l2_norm(diff), runtime_ms)
    return Solution(rec, mesh, space, field, exact)


def solution_dump(sol: Solution) -> dict:
    xy = sol.space.coords
    return {
        "eps": sol.record.eps,
        "p": sol.record.p,
        "x": [float(v) for v in xy[:, 0]],
        "y": [float(v) for v in xy[:, 1]],
        "u": [float(v) for v in sol.field.values],
    }
