"""Domain-family convergence reports and the localization inequality."""

from __future__ import annotations

import math

import numpy as np

from ..errors import BadNeighborhood, GridTouchesPole, UnsupportedDomain
from ..geometry import Annulus, Domain, SmoothDomain, UnitDisc, curve_from_samples
from .evaluator import make_evaluator


def green_convergence_report(evaluators, limit_evaluator, p: complex, grid) -> list[float]:
    """sup_K |G_j(z,p) - G_limit(z,p)| for each member of a domain family.

    `grid` is a compact set of points, valid in the limit domain minus the pole.
    """
    grid = np.asarray(grid, dtype=complex)
    if np.min(np.abs(grid - p)) < 1e-9:
        raise GridTouchesPole("compact comparison grid contains the pole")
    limit_vals = np.array([limit_evaluator.green(z, p) for z in grid])
    sups = []
    for ev in evaluators:
        vals = np.array([ev.green(z, p) for z in grid])
        sups.append(float(np.abs(vals - limit_vals).max()))
    return sups


def localization_bound(R: float, delta: float) -> float:
    """The tangent-ball localization bound 2 log((2R + 3 delta)/(2R - delta))."""
    return 2.0 * math.log((2.0 * R + 3.0 * delta) / (2.0 * R - delta))


def _circle_intersections(c0: complex, r0: float, c1: complex, r1: float):
    d = abs(c1 - c0)
    if d >= r0 + r1 or d <= abs(r0 - r1):
        return None
    a = (r0**2 - r1**2 + d**2) / (2 * d)
    h = math.sqrt(max(r0**2 - a**2, 0.0))
    base = c0 + a * (c1 - c0) / d
    offset = 1j * h * (c1 - c0) / d
    return base + offset, base - offset


def build_lens(domain: Domain, center: complex, radius: float,
               rounding: float | None = None, degree: int = 256) -> SmoothDomain:
    """Smoothed U cap D for a disc neighborhood U of a boundary point.

    Supported for domains whose relevant boundary piece is a circle (disc,
    annulus).  Corners of the intersection are rounded by convolving the
    arclength parametrization with a periodic Gaussian of width `rounding`
    (default 1e-2 times the diameter of U).
    """
    if isinstance(domain, UnitDisc):
        bc, br = 0.0 + 0.0j, 1.0
    elif isinstance(domain, Annulus):
        bc, br = 0.0 + 0.0j, 1.0
        if abs(center) - radius < domain.r:
            raise BadNeighborhood("neighborhood reaches the inner boundary")
    else:
        raise UnsupportedDomain("lens construction implemented for circle boundaries")
    for hole in domain.hole_centers():
        if abs(hole - center) < radius:
            raise BadNeighborhood("U cap D is not simply connected")
    pts = _circle_intersections(bc, br, center, radius)
    if pts is None:
        raise BadNeighborhood("neighborhood does not cut the boundary transversally")
    q1, q2 = pts

    # arc of the domain boundary inside U, traversed counterclockwise
    a1, a2 = np.angle(q1 - bc), np.angle(q2 - bc)
    if a1 > a2:
        a1, a2 = a2, a1
    mid = bc + br * np.exp(1j * 0.5 * (a1 + a2))
    if abs(mid - center) > radius:  # wrong arc, take the complement
        a1, a2 = a2, a1 + 2 * math.pi
    th_out = np.linspace(a1, a2, 512)
    arc_boundary = bc + br * np.exp(1j * th_out)

    # arc of dU inside D, continuing counterclockwise around the lens
    b1 = np.angle(arc_boundary[-1] - center)
    b2 = np.angle(arc_boundary[0] - center)
    while b2 <= b1:
        b2 += 2 * math.pi
    midU = center + radius * np.exp(1j * 0.5 * (b1 + b2))
    if not domain.contains(midU):
        b1, b2 = b2 - 2 * math.pi, b1
        while b2 <= b1:
            b2 += 2 * math.pi
    th_u = np.linspace(b1, b2, 512)
    arc_u = center + radius * np.exp(1j * th_u)

    poly = np.concatenate([arc_boundary[:-1], arc_u[:-1]])
    # uniform arclength resampling, then periodic Gaussian mollification
    seg = np.abs(np.diff(poly, append=poly[:1]))
    s = np.concatenate([[0.0], np.cumsum(seg)])[:-1]
    total = s[-1] + seg[-1]
    n = 4096
    su = np.linspace(0.0, total, n, endpoint=False)
    resampled = np.interp(su, s, poly.real, period=total) + 1j * np.interp(
        su, s, poly.imag, period=total
    )
    if rounding is None:
        rounding = 1e-2 * (2 * radius)
    sigma = rounding
    k = np.fft.fftfreq(n, d=total / n) * 2 * math.pi
    kernel = np.exp(-0.5 * (sigma * k) ** 2)
    smooth = np.fft.ifft(np.fft.fft(resampled) * kernel)
    curve = curve_from_samples(smooth, degree)
    return SmoothDomain([curve])


def localization_gap(domain: Domain, center: complex, radius: float,
                     z: complex, p: complex, R: float,
                     n_per_curve: int = 512) -> tuple[float, float]:
    """Gap G_D(z,p) - G_{U cap D}(z,p) and its tangent-ball bound.

    R is the two-sided tangent ball radius along the shared boundary arc
    (1/max curvature is a safe choice); the bound uses dist(z, dD).
    """
    lens = build_lens(domain, center, radius)
    lens_eval = make_evaluator(lens, "bie", n_per_curve=n_per_curve)
    base_eval = make_evaluator(domain)
    gap = base_eval.green(z, p) - lens_eval.green(z, p)
    delta, _ = domain.distance(z)
    return float(gap), localization_bound(R, delta)
