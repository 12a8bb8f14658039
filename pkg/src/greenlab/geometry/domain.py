"""Planar domains, defining functions, and the affine rescaling family.

Wirtinger convention throughout: d = d/dz = (d/dx - i d/dy)/2, so for a real
function psi the full gradient is 2*conj(d_psi) and |grad psi| = 2|d_psi|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from ..errors import NotInDomain, OutOfChart, ZeroGradient
from .curves import BoundaryCurve, QuadratureSet, build_quadrature, circle


@dataclass(frozen=True)
class PsiJet:
    """Defining function value with first and second Wirtinger derivatives."""

    psi: float
    d_psi: complex
    d2_psi: complex
    ddbar_psi: float

    @property
    def dbar_psi(self) -> complex:
        # psi is real, so the antiholomorphic derivative is the conjugate
        return np.conj(self.d_psi)


def _finite(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("point has non-finite components")
    return z


@dataclass(frozen=True)
class Domain:
    kind: str = "base"

    # scale used for step sizes / tolerances; 2 = diameter of the unit disc
    @property
    def scale(self) -> float:
        return 2.0

    def psi_jet(self, z: complex) -> PsiJet:
        raise NotImplementedError

    def contains(self, z: complex) -> bool:
        try:
            return self.psi_jet(z).psi < 0.0
        except OutOfChart:
            return False

    def require_inside(self, z: complex) -> complex:
        z = _finite(z)
        if not self.contains(z):
            raise NotInDomain(f"{z} is not inside the {self.kind} domain")
        return z

    def distance(self, z: complex) -> tuple[float, complex]:
        """(distance to the boundary, nearest boundary point); z must be inside."""
        raise NotImplementedError

    def reach(self, p0: complex) -> float:
        """Length of the inward normal segment along which p0 stays the foot."""
        raise NotImplementedError

    def boundary_curves(self) -> tuple[BoundaryCurve, ...]:
        raise NotImplementedError

    def inward_normal(self, p0: complex) -> complex:
        jet = self.psi_jet(p0)
        if abs(jet.d_psi) == 0.0:
            raise ZeroGradient("defining-function gradient vanishes at the base point")
        return -np.conj(jet.d_psi) / abs(jet.d_psi)

    def hole_centers(self) -> tuple[complex, ...]:
        return ()


class UnitDisc(Domain):
    def __init__(self):
        object.__setattr__(self, "kind", "UnitDisc")

    def psi_jet(self, z: complex) -> PsiJet:
        z = _finite(z)
        return PsiJet(psi=abs(z) ** 2 - 1.0, d_psi=np.conj(z), d2_psi=0.0, ddbar_psi=1.0)

    def distance(self, z: complex) -> tuple[float, complex]:
        z = self.require_inside(z)
        r = abs(z)
        foot = z / r if r > 0 else 1.0 + 0.0j
        return 1.0 - r, complex(foot)

    def reach(self, p0: complex) -> float:
        return 1.0

    def boundary_curves(self):
        return (circle(1.0),)


class HalfPlane(Domain):
    """{z : 2 Re(a z) + k < 0} with a != 0."""

    def __init__(self, a: complex, k: float):
        if a == 0:
            raise ZeroGradient("half-plane coefficient a must be nonzero")
        object.__setattr__(self, "kind", "HalfPlane")
        object.__setattr__(self, "a", complex(a))
        object.__setattr__(self, "k", float(k))

    def psi_jet(self, z: complex) -> PsiJet:
        z = _finite(z)
        psi = 2.0 * (self.a * z).real + self.k
        return PsiJet(psi=psi, d_psi=self.a, d2_psi=0.0, ddbar_psi=0.0)

    def distance(self, z: complex) -> tuple[float, complex]:
        z = self.require_inside(z)
        jet = self.psi_jet(z)
        delta = -jet.psi / (2.0 * abs(self.a))
        foot = z + delta * np.conj(self.a) / abs(self.a)
        return delta, complex(foot)

    def reach(self, p0: complex) -> float:
        return math.inf

    def boundary_curves(self):
        raise NotImplementedError("the half plane is handled in closed form only")

    def reflect(self, p: complex) -> complex:
        """Mirror point across the boundary line."""
        return p - (2.0 * (self.a * p).real + self.k) / self.a


class Annulus(Domain):
    """{r < |z| < 1}; two interchangeable defining functions (see psi_variant)."""

    def __init__(self, r: float, psi_variant: str = "product"):
        if not 0.0 < r < 1.0:
            raise ValueError("annulus inner radius must lie in (0, 1)")
        if psi_variant not in ("product", "radial"):
            raise ValueError("psi_variant must be 'product' or 'radial'")
        object.__setattr__(self, "kind", "Annulus")
        object.__setattr__(self, "r", float(r))
        object.__setattr__(self, "psi_variant", psi_variant)

    def psi_jet(self, z: complex) -> PsiJet:
        z = _finite(z)
        r2 = self.r**2
        t = abs(z) ** 2
        if self.psi_variant == "product":
            # psi = (|z|^2 - 1)(|z|^2 - r^2)
            psi = (t - 1.0) * (t - r2)
            d = np.conj(z) * (2.0 * t - 1.0 - r2)
            d2 = 2.0 * np.conj(z) ** 2
            ddbar = 4.0 * t - 1.0 - r2
            return PsiJet(psi=psi, d_psi=d, d2_psi=d2, ddbar_psi=ddbar)
        # psi = log|z| * log(|z|/r), smooth away from the origin
        if t == 0.0:
            raise OutOfChart("radial defining function undefined at the origin")
        u = 0.5 * math.log(t)
        ell = math.log(self.r)
        psi = u * (u - ell)
        d = (2.0 * u - ell) / (2.0 * z)
        d2 = (1.0 - 2.0 * u + ell) / (2.0 * z**2)
        ddbar = 1.0 / (2.0 * t)
        return PsiJet(psi=psi, d_psi=d, d2_psi=d2, ddbar_psi=ddbar)

    def distance(self, z: complex) -> tuple[float, complex]:
        z = self.require_inside(z)
        rho = abs(z)
        unit = z / rho
        if 1.0 - rho <= rho - self.r:
            return 1.0 - rho, complex(unit)
        return rho - self.r, complex(self.r * unit)

    def reach(self, p0: complex) -> float:
        return 0.5 * (1.0 - self.r)

    def boundary_curves(self):
        return (circle(1.0), circle(self.r, clockwise=True))

    def hole_centers(self):
        return (0.0 + 0.0j,)


class SmoothDomain(Domain):
    """Multiply connected domain bounded by Fourier curves.

    The defining function is the signed distance in a tubular neighborhood of
    the boundary (C^2 there since the tube half-width is half the estimated
    reach), blended to a constant negative cap in the deep interior.
    """

    def __init__(self, curves):
        curves = tuple(curves)
        if not curves:
            raise ValueError("need at least one boundary curve")
        outer = [c for c in curves if c.orientation > 0]
        inner = [c for c in curves if c.orientation < 0]
        if len(outer) != 1:
            raise ValueError("expected exactly one positively oriented outer curve")
        object.__setattr__(self, "kind", "Smooth")
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "outer", outer[0])
        object.__setattr__(self, "inner", tuple(inner))
        grid = np.linspace(0.0, 2 * np.pi, 512, endpoint=False)
        max_kappa = max(float(np.abs(c.curvature(grid)).max()) for c in curves)
        tube = 0.5 / max(max_kappa, 1e-12)
        gaps = self._curve_gaps(grid)
        if gaps is not None:
            tube = min(tube, 0.45 * gaps)
        object.__setattr__(self, "tube", tube)
        pts = self.outer.point(grid)
        object.__setattr__(self, "_diam", float(np.abs(pts[:, None] - pts[None, :]).max()))

    def _curve_gaps(self, grid):
        if len(self.curves) < 2:
            return None
        gap = math.inf
        for i in range(len(self.curves)):
            for j in range(i + 1, len(self.curves)):
                a = self.curves[i].point(grid)
                b = self.curves[j].point(grid)
                gap = min(gap, float(np.abs(a[:, None] - b[None, :]).min()))
        return gap

    @property
    def scale(self) -> float:
        return self._diam

    def boundary_curves(self):
        return self.curves

    def hole_centers(self):
        grid = np.linspace(0.0, 2 * np.pi, 256, endpoint=False)
        return tuple(complex(c.point(grid).mean()) for c in self.inner)

    def _winding_inside(self, z: complex) -> bool:
        grid = np.linspace(0.0, 2 * np.pi, 1024, endpoint=False)
        total = 0.0
        for c in self.curves:
            pts = c.point(grid) - z
            total += np.angle(np.roll(pts, -1) / pts).sum() / (2 * np.pi)
        return abs(total - 1.0) < 0.25

    def _nearest(self, z: complex) -> tuple[float, complex, BoundaryCurve, float]:
        best = (math.inf, 0.0 + 0.0j, None, 0.0)
        grid = np.linspace(0.0, 2 * np.pi, 256, endpoint=False)
        for c in self.curves:
            pts = c.point(grid)
            d = np.abs(pts - z)
            order = np.argsort(d)
            # ties broken toward smaller theta: argsort is stable on the grid
            theta = float(grid[order[0]])
            theta = _newton_foot(c, z, theta)
            foot = complex(c.point(theta))
            dist = abs(z - foot)
            if dist < best[0] - 1e-15:
                best = (dist, foot, c, theta)
        return best

    def signed_distance(self, z: complex) -> tuple[float, complex, BoundaryCurve, float]:
        dist, foot, curve, theta = self._nearest(z)
        sign = -1.0 if self._winding_inside(z) else 1.0
        return sign * dist, foot, curve, theta

    def psi_jet(self, z: complex) -> PsiJet:
        z = _finite(z)
        s, foot, curve, theta = self.signed_distance(z)
        tube = self.tube
        if s > tube:
            raise OutOfChart("point beyond the exterior tube of the defining function")
        b1, b2 = tube / 3.0, 2.0 * tube / 3.0
        if s <= -b2:
            cap = _blend(-b2, b1, b2)[0]
            return PsiJet(psi=cap, d_psi=0.0, d2_psi=0.0, ddbar_psi=0.0)
        blend, dblend, d2blend = _blend(s, b1, b2)
        nu = complex(curve.normal(theta))
        kappa = float(curve.curvature(theta))
        # signed distance jet: grad s = nu, Hessian = kappa/(1+s*kappa) tau tau^T
        c = kappa / (1.0 + s * kappa)
        d_s = np.conj(nu) / 2.0
        tau = 1j * nu  # unit tangent
        d2_s = c * np.conj(tau) ** 2 / 4.0
        ddbar_s = c / 4.0
        d = dblend * d_s
        d2 = d2blend * d_s**2 + dblend * d2_s
        ddbar = d2blend * abs(d_s) ** 2 + dblend * ddbar_s
        return PsiJet(psi=blend, d_psi=d, d2_psi=d2, ddbar_psi=float(ddbar))

    def distance(self, z: complex) -> tuple[float, complex]:
        z = self.require_inside(z)
        dist, foot, _, _ = self._nearest(z)
        return dist, foot

    def reach(self, p0: complex) -> float:
        return self.tube


def _newton_foot(curve: BoundaryCurve, z: complex, theta: float, iters: int = 30) -> float:
    """Polish argmin |z - gamma(theta)|^2 by Newton from a coarse seed."""
    for _ in range(iters):
        g = complex(curve.point(theta))
        d1 = complex(curve.derivative(theta, 1))
        d2 = complex(curve.derivative(theta, 2))
        diff = z - g
        f1 = -2.0 * (np.conj(diff) * d1).real
        f2 = 2.0 * (abs(d1) ** 2 - (np.conj(diff) * d2).real)
        if f2 <= 0:
            break
        step = f1 / f2
        theta -= step
        if abs(step) < 1e-14:
            break
    return theta % (2 * np.pi)


def _blend(s: float, b1: float, b2: float):
    """C^2 saturation: identity for s >= -b1, constant for s <= -b2.

    Returns (value, first, second derivative) of the blend at s.
    """
    if s >= -b1:
        return s, 1.0, 0.0
    if s <= -b2:
        s = -b2
    # quintic q on [-b2, -b1] with q(-b1) = -b1, q' = 1, q'' = 0 at -b1
    # and q' = q'' = 0 at -b2
    x = (s + b2) / (b2 - b1)  # x in [0, 1], x=1 at s=-b1
    h = b2 - b1
    # q(x) = c0 + h*(x^3 - x^4/2)*? -- solved: q'(x)/h has q'(1)=1 -> p(x)=x^2(2-x)^2? use
    # p(x) = x^3(6x^2-15x+10) is the smoothstep with p(1)=1, p'(1)=0; we need
    # derivative profile: choose q'(s) = p(x) with p = x^2(3-2x) (C^1) is not C^2.
    # Use p(x) = 6x^5 - 15x^4 + 10x^3, which has p(0)=0, p(1)=1, p'(0)=p'(1)=0,
    # p''(0)=p''(1)=0; then q(s) = -b1 - h * integral_x^1 p.
    p = 6 * x**5 - 15 * x**4 + 10 * x**3
    dp = (30 * x**4 - 60 * x**3 + 30 * x**2) / h
    # integral of p from x to 1: P(1)-P(x), P(x) = x^6 - 3x^5 + 2.5x^4
    P = x**6 - 3 * x**5 + 2.5 * x**4
    value = -b1 - h * (0.5 - P)
    return value, p, dp


# -- module-level operations ---------------------------------------------------


def eval_psi(domain: Domain, z: complex) -> PsiJet:
    return domain.psi_jet(z)


def distance_to_boundary(domain: Domain, z: complex) -> tuple[float, complex]:
    return domain.distance(z)


def boundary_quadrature(domain: Domain, n: int) -> QuadratureSet:
    return build_quadrature(domain.boundary_curves(), n)


@dataclass(frozen=True)
class AffineMap:
    """z -> (z - p) / s with s = -psi(p) > 0."""

    p: complex
    s: float

    def forward(self, z):
        return (np.asarray(z) - self.p) / self.s

    def inverse(self, w):
        return self.p + np.asarray(w) * self.s

    @property
    def derivative(self) -> float:
        return 1.0 / self.s


def rescale(domain: Domain, p: complex) -> tuple[AffineMap, Callable[[complex], PsiJet]]:
    """Blow-up map at p together with the rescaled defining-function sampler."""
    p = domain.require_inside(p)
    s = -domain.psi_jet(p).psi

    tmap = AffineMap(p=p, s=s)

    def image_psi(w: complex) -> PsiJet:
        jet = domain.psi_jet(tmap.inverse(w))
        return PsiJet(
            psi=jet.psi / s,
            d_psi=jet.d_psi,            # chain rule: d/dw = s d/dz, then /s
            d2_psi=jet.d2_psi * s,
            ddbar_psi=jet.ddbar_psi * s,
        )

    return tmap, image_psi


def halfplane_limit(d_psi_at_p0: complex) -> HalfPlane:
    """Blow-up limit {2 Re(d_psi(p0) z) - 1 < 0} of the rescaled domains."""
    if d_psi_at_p0 == 0:
        raise ZeroGradient("cannot form the half-plane limit with zero gradient")
    return HalfPlane(a=d_psi_at_p0, k=-1.0)


def perimeter_adaptive(curve: BoundaryCurve) -> float:
    """Arclength by adaptive quadrature; oracle for the trapezoid rule."""
    val, _ = quad(lambda t: abs(complex(curve.derivative(t))), 0.0, 2 * np.pi,
                  epsabs=1e-13, epsrel=1e-13, limit=400)
    return val
