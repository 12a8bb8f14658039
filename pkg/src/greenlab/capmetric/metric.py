"""Pointwise capacity-metric quantities: density, curvature, comparability."""

from __future__ import annotations

import math

import numpy as np

from ..errors import NotUnitTangent, UnsupportedDomain
from ..geometry import Annulus, Domain, HalfPlane, UnitDisc
from ..green.closed_forms import annulus_hyperbolic_density, disc_hyperbolic_density
from ..robin import capacity_density, robin_derivatives, robin_value


def grad_robin(eval_, p: complex) -> complex:
    if hasattr(eval_, "robin_derivative"):
        return complex(eval_.robin_derivative(p, 1, 0))
    return robin_derivatives(eval_, p, 1, 0)


def mixed_robin(eval_, p: complex) -> float:
    if hasattr(eval_, "robin_derivative"):
        return complex(eval_.robin_derivative(p, 1, 1)).real
    return complex(robin_derivatives(eval_, p, 1, 1)).real


def curvature(eval_, p: complex) -> float:
    """Gaussian curvature 4 c^-2 dd-bar Lambda of the capacity metric."""
    lam = robin_value(eval_, p)
    return 4.0 * math.exp(2.0 * lam) * mixed_robin(eval_, p)


def euclid_curvature(eval_, z: complex, unit_tangent: complex) -> float:
    """Euclidean curvature Im(dLambda(z) tangent) of an arclength geodesic."""
    if abs(abs(unit_tangent) - 1.0) > 1e-9:
        raise NotUnitTangent("tangent vector must have unit Euclidean length")
    return float(np.imag(grad_robin(eval_, z) * unit_tangent))


def hyperbolic_density(domain: Domain, z: complex) -> float:
    """Curvature -4 hyperbolic density, closed form (disc, half plane, annulus)."""
    if isinstance(domain, UnitDisc):
        return disc_hyperbolic_density(z)
    if isinstance(domain, Annulus):
        return annulus_hyperbolic_density(domain, z)
    if isinstance(domain, HalfPlane):
        # the capacity and hyperbolic metrics of a half plane coincide
        jet = domain.psi_jet(z)
        return abs(jet.d_psi) / (-jet.psi)
    raise UnsupportedDomain("hyperbolic density available in closed form only")


def comparability_report(eval_, domain: Domain, band: float,
                         delta_cap: float | None = None):
    """Extremes of c/rho and of c^2 / ((-psi)^-1 + (-psi)^-2 |dpsi|^2).

    Both ratios are scanned over a grid in {-band < psi < 0}; pass delta_cap
    to restrict the second scan to points with dist(z, boundary) < delta_cap.
    Rotation invariance of the model domains makes a radial scan sufficient.
    """
    def ratios(z):
        c = capacity_density(eval_, z)
        jet = domain.psi_jet(z)
        first = c / hyperbolic_density(domain, z)
        denom = 1.0 / (-jet.psi) + abs(jet.d_psi) ** 2 / jet.psi**2
        second = c**2 / denom
        return first, second

    if isinstance(domain, UnitDisc):
        radii = np.linspace(0.0, 1 - 1e-6, 2000)
    elif isinstance(domain, Annulus):
        radii = np.linspace(domain.r + 1e-7, 1 - 1e-7, 4000)
    else:
        raise UnsupportedDomain("comparability scan implemented for disc and annulus")
    first_vals, second_vals = [], []
    for rr in radii:
        psi = domain.psi_jet(rr).psi
        if not (-band < psi < 0):
            continue
        f, s = ratios(complex(rr))
        first_vals.append(f)
        if delta_cap is None or domain.distance(complex(rr))[0] < delta_cap:
            second_vals.append(s)
    if not first_vals:
        return (math.nan, math.nan), (math.nan, math.nan)
    first_range = (min(first_vals), max(first_vals))
    second_range = (
        (min(second_vals), max(second_vals)) if second_vals else (math.nan, math.nan)
    )
    return first_range, second_range
