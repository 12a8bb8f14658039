"""Closed-form Green's functions for the unit disc and a half plane.

Disc:       G(z,p) = -log|z-p| + log|1 - conj(p) z|
Half plane: G(z,p) = -log|z-p| + log|z - p*| with p* the mirror point.

Both evaluators expose the regular part H, its z-derivatives of any order,
the Robin function and its Wirtinger derivatives, all analytically.  The z
argument may be a numpy array; the pole is always scalar.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import CoincidentPoints, NotInDomain
from ..geometry import Annulus, Domain, HalfPlane, UnitDisc


def _as_points(domain: Domain, z, p: complex):
    z = np.asarray(z, dtype=complex)
    p = domain.require_inside(complex(p))
    jet_ok = (
        np.abs(z) < 1.0
        if isinstance(domain, UnitDisc)
        else 2.0 * (domain.a * z).real + domain.k < 0.0
    )
    if not np.all(jet_ok):
        raise NotInDomain("evaluation point outside the domain")
    return z, p


def _maybe_scalar(value, z):
    if np.ndim(z) == 0:
        return value.item() if hasattr(value, "item") else value
    return value


class DiscClosedForm:
    backend = "ClosedForm"

    def __init__(self):
        self.domain = UnitDisc()

    def green(self, z, p):
        z, p = _as_points(self.domain, z, p)
        if np.any(z == p):
            raise CoincidentPoints("Green's function has a pole at z == p")
        val = -np.log(np.abs(z - p)) + np.log(np.abs(1.0 - np.conj(p) * z))
        return _maybe_scalar(val, z)

    def regular_part(self, z, p):
        z, p = _as_points(self.domain, z, p)
        return _maybe_scalar(np.log(np.abs(1.0 - np.conj(p) * z)), z)

    def regular_part_dz(self, z, p, n: int = 1):
        z, p = _as_points(self.domain, z, p)
        if n < 1:
            raise ValueError("derivative order must be >= 1")
        pb = np.conj(p)
        val = -0.5 * math.factorial(n - 1) * pb**n / (1.0 - pb * z) ** n
        return _maybe_scalar(val, z)

    def grad_green(self, z, p):
        z, p = _as_points(self.domain, z, p)
        if np.any(z == p):
            raise CoincidentPoints("gradient undefined at the pole")
        pb = np.conj(p)
        val = -0.5 / (z - p) - 0.5 * pb / (1.0 - pb * z)
        return _maybe_scalar(val, z)

    def d2_green_dz_dwbar(self, z, w):
        z, w = _as_points(self.domain, z, w)
        return _maybe_scalar(-0.5 / (1.0 - np.conj(w) * z) ** 2, z)

    def robin(self, p) -> float:
        p = self.domain.require_inside(complex(p))
        return math.log(1.0 - abs(p) ** 2)

    def robin_derivative(self, p, alpha: int, beta: int) -> complex:
        p = self.domain.require_inside(complex(p))
        if alpha == 0 and beta == 0:
            return complex(self.robin(p))
        t = abs(p) ** 2
        one = 1.0 - t
        table = {
            (1, 0): -np.conj(p) / one,
            (0, 1): -p / one,
            (1, 1): -1.0 / one**2,
            (2, 0): -np.conj(p) ** 2 / one**2,
            (0, 2): -(p**2) / one**2,
            (2, 1): -2.0 * np.conj(p) / one**3,
            (1, 2): -2.0 * p / one**3,
            (3, 0): -2.0 * np.conj(p) ** 3 / one**3,
            (0, 3): -2.0 * p**3 / one**3,
        }
        try:
            return complex(table[(alpha, beta)])
        except KeyError:
            raise ValueError("disc closed form tabulates derivatives up to order 3")

    def taylor_coefficient(self, p, n: int) -> complex:
        p = self.domain.require_inside(complex(p))
        if n == 0:
            return complex(self.robin(p))
        return -np.conj(p) ** n / (n * (1.0 - abs(p) ** 2) ** n)


class HalfPlaneClosedForm:
    backend = "ClosedForm"

    def __init__(self, domain: HalfPlane):
        self.domain = domain

    def _mirror(self, p: complex) -> complex:
        return self.domain.reflect(p)

    def green(self, z, p):
        z, p = _as_points(self.domain, z, p)
        if np.any(z == p):
            raise CoincidentPoints("Green's function has a pole at z == p")
        val = -np.log(np.abs(z - p)) + np.log(np.abs(z - self._mirror(p)))
        return _maybe_scalar(val, z)

    def regular_part(self, z, p):
        z, p = _as_points(self.domain, z, p)
        return _maybe_scalar(np.log(np.abs(z - self._mirror(p))), z)

    def regular_part_dz(self, z, p, n: int = 1):
        z, p = _as_points(self.domain, z, p)
        if n < 1:
            raise ValueError("derivative order must be >= 1")
        ps = self._mirror(p)
        val = 0.5 * (-1.0) ** (n - 1) * math.factorial(n - 1) / (z - ps) ** n
        return _maybe_scalar(val, z)

    def grad_green(self, z, p):
        z, p = _as_points(self.domain, z, p)
        if np.any(z == p):
            raise CoincidentPoints("gradient undefined at the pole")
        val = -0.5 / (z - p) + 0.5 / (z - self._mirror(p))
        return _maybe_scalar(val, z)

    def robin(self, p) -> float:
        p = self.domain.require_inside(complex(p))
        a, k = self.domain.a, self.domain.k
        return math.log(abs(2.0 * (a * p).real + k)) - math.log(abs(a))

    def robin_derivative(self, p, alpha: int, beta: int) -> complex:
        p = self.domain.require_inside(complex(p))
        if alpha == 0 and beta == 0:
            return complex(self.robin(p))
        a = self.domain.a
        psi = 2.0 * (a * p).real + self.domain.k
        m = alpha + beta
        return (
            a**alpha
            * np.conj(a) ** beta
            * (-1.0) ** (m - 1)
            * math.factorial(m - 1)
            / psi**m
        )

    def taylor_coefficient(self, p, n: int) -> complex:
        """Direct expansion of log(z - p*): the affine geometry gives
        p - p* = psi(p)/a, hence c_n = (-1)^(n-1) a^n / (n psi(p)^n)."""
        p = self.domain.require_inside(complex(p))
        if n == 0:
            return complex(self.robin(p))
        a = self.domain.a
        psi = 2.0 * (a * p).real + self.domain.k
        return (-1.0) ** (n - 1) * a**n / (n * psi**n)


def mobius_halfplane_to_disc():
    """The conformal map (z + 1/2)/(z - 3/2) from {Re z < 1/2} onto the disc."""
    domain = HalfPlane(a=1.0, k=-1.0)

    def phi(z):
        return (z + 0.5) / (z - 1.5)

    def dphi(z):
        return -2.0 / (z - 1.5) ** 2

    return domain, phi, dphi


def disc_hyperbolic_density(z: complex) -> float:
    """Curvature -4 hyperbolic density of the unit disc."""
    return 1.0 / (1.0 - abs(z) ** 2)


def annulus_hyperbolic_density(domain: Annulus, z: complex) -> float:
    """Curvature -4 hyperbolic density of {r < |z| < 1}.

    Pullback of the disc metric through the universal covering: the annulus
    lifts to the strip {log r < Re w < 0} via w = log z, and the strip carries
    the density pi / (2 L sin(pi (Re w - log r)/L)) with L = -log r.
    """
    rho = abs(z)
    L = -math.log(domain.r)
    arg = math.pi * (math.log(rho) - math.log(domain.r)) / L
    return math.pi / (2.0 * L * rho * math.sin(arg))
