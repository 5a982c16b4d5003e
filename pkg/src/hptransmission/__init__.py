"""hp finite elements for a singularly perturbed transmission problem on annuli."""

from .geometry import AnnularGeometry, BoundaryFittedFrame, circle_point, psi_map
from .quadrature import QuadRule, NodalBasis1D, gauss_legendre, gauss_lobatto, interpolate_gl
from .mesh import Element, LayerMesh, build_mesh, element_map
from .space import FeSpace, DiscreteField, build_space, eval_field
from .problem import TransmissionProblem, constant_problem
from .assembly import SparseSystem, assemble, assemble_full, solve_spd
from .bessel import ScaledBessel, bessel_scaled
from .exact import RadialExact, radial_exact, eval_exact, limit_solution, manufactured_case
from .expansion import CompositeApprox, build_composite, composite_error
from .postproc import SweepRecord, energy_norm, fit_rate

__version__ = "0.1.0"

__all__ = [
    "AnnularGeometry",
    "BoundaryFittedFrame",
    "circle_point",
    "psi_map",
    "QuadRule",
    "NodalBasis1D",
    "gauss_legendre",
    "gauss_lobatto",
    "interpolate_gl",
    "Element",
    "LayerMesh",
    "build_mesh",
    "element_map",
    "FeSpace",
    "DiscreteField",
    "build_space",
    "eval_field",
    "TransmissionProblem",
    "constant_problem",
    "SparseSystem",
    "assemble",
    "assemble_full",
    "solve_spd",
    "ScaledBessel",
    "bessel_scaled",
    "RadialExact",
    "radial_exact",
    "eval_exact",
    "limit_solution",
    "manufactured_case",
    "CompositeApprox",
    "build_composite",
    "composite_error",
    "SweepRecord",
    "energy_norm",
    "fit_rate",
]
