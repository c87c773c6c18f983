"""Numerical integration on the sphere and the group."""

from .functionals import (
    TailDivergence,
    biradial_points,
    biradial_reduction,
    center_of_mass,
    center_of_mass_rule,
    dirichlet_sphere,
    fs_quotient,
    fs_quotient_rule,
    integrate_group_biradial,
    integrate_group_qmc,
    integrate_sphere,
    is_biradial,
    sphere_means,
    transported_grad_sq,
    yamabe_from_means,
    yamabe_sphere,
    yamabe_terms,
)
from .measures import FunctionalReport, MeasureSpec, eta_volume
from .quadrature import QuadratureError, adaptive_square

__all__ = [
    "FunctionalReport", "MeasureSpec", "QuadratureError", "TailDivergence", "adaptive_square",
    "biradial_points", "biradial_reduction", "center_of_mass", "center_of_mass_rule",
    "dirichlet_sphere", "eta_volume", "fs_quotient", "fs_quotient_rule", "integrate_group_biradial",
    "integrate_group_qmc", "integrate_sphere", "is_biradial", "sphere_means", "transported_grad_sq",
    "yamabe_from_means", "yamabe_sphere", "yamabe_terms",
]
