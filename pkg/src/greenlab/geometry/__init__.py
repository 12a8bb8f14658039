from .curves import BoundaryCurve, QuadratureSet, build_quadrature, circle, curve_from_samples
from .domain import (
    AffineMap,
    Annulus,
    Domain,
    HalfPlane,
    PsiJet,
    SmoothDomain,
    UnitDisc,
    boundary_quadrature,
    distance_to_boundary,
    eval_psi,
    halfplane_limit,
    perimeter_adaptive,
    rescale,
)
from .io import domain_from_dict, domain_to_dict, load_domain, save_domain

__all__ = [
    "AffineMap",
    "Annulus",
    "BoundaryCurve",
    "Domain",
    "HalfPlane",
    "PsiJet",
    "QuadratureSet",
    "SmoothDomain",
    "UnitDisc",
    "boundary_quadrature",
    "build_quadrature",
    "circle",
    "curve_from_samples",
    "distance_to_boundary",
    "domain_from_dict",
    "domain_to_dict",
    "eval_psi",
    "halfplane_limit",
    "load_domain",
    "perimeter_adaptive",
    "rescale",
    "save_domain",
]
