"""Per-domain Green's function evaluators.

All evaluators share one informal protocol:

    green(z, p) -> float                 G(z, p)
    regular_part(z, p) -> float          H(z, p), z = p allowed
    regular_part_dz(z, p, n) -> complex  d^n H / dz^n, n >= 1
    grad_green(z, p) -> complex          dG/dz
    robin(p) -> float                    Robin constant at p
    taylor_coefficient(p, n) -> complex  (analytic backends)
    robin_derivative(p, a, b) -> complex (analytic backends)

Closed forms cover the disc and half planes, the Laurent series covers
concentric annuli, and the Nystrom solver covers everything with curves.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..errors import CoincidentPoints, UnsupportedDomain
from ..geometry import AffineMap, Annulus, Domain, HalfPlane, SmoothDomain, UnitDisc
from .annulus_series import AnnulusSeries
from .bie import HarmonicSolution, NystromSolver
from .closed_forms import DiscClosedForm, HalfPlaneClosedForm


class NystromGreen:
    """Green's function through the dense Dirichlet solver (any curved domain)."""

    backend = "BIE"

    def __init__(self, domain: Domain, n_per_curve: int = 256, cache_size: int = 96):
        self.domain = domain
        self.solver = NystromSolver(domain, n_per_curve)
        self._solution_for = lru_cache(maxsize=cache_size)(self._solve_pole)

    def _solve_pole(self, p: complex) -> HarmonicSolution:
        nodes = self.solver.quadrature.nodes
        return self.solver.solve(np.log(np.abs(nodes - p)))

    def regular_part(self, z, p):
        p = self.domain.require_inside(complex(p))
        return self._solution_for(p).value(z)

    def regular_part_dz(self, z, p, n: int = 1):
        p = self.domain.require_inside(complex(p))
        return self._solution_for(p).derivative(z, n)

    def green(self, z, p):
        z_arr = np.asarray(z, dtype=complex)
        p = self.domain.require_inside(complex(p))
        if np.any(z_arr == p):
            raise CoincidentPoints("Green's function has a pole at z == p")
        out = -np.log(np.abs(z_arr - p)) + self._solution_for(p).value(z_arr)
        return float(out) if np.ndim(z) == 0 else out

    def grad_green(self, z, p):
        z_arr = np.asarray(z, dtype=complex)
        p = self.domain.require_inside(complex(p))
        if np.any(z_arr == p):
            raise CoincidentPoints("gradient undefined at the pole")
        out = -0.5 / (z_arr - p) + self._solution_for(p).derivative(z_arr, 1)
        return complex(out) if np.ndim(z) == 0 else out

    def robin(self, p) -> float:
        p = self.domain.require_inside(complex(p))
        return float(self._solution_for(p).value(p))


class AffineImageGreen:
    """Exact transport of a base evaluator to an affine image T(D).

    For T(z) = (z - p0)/s with s > 0, conformal invariance gives
    G_TD(z, p) = G_D(T^-1 z, T^-1 p) and H_TD = H_D - log s.
    """

    backend = "AffineImage"

    def __init__(self, base, tmap: AffineMap):
        self.base = base
        self.map = tmap
        self.domain = base.domain  # checks happen on pulled-back points

    def _pull(self, z):
        return self.map.inverse(z)

    def green(self, z, p):
        return self.base.green(self._pull(z), self._pull(p))

    def regular_part(self, z, p):
        return self.base.regular_part(self._pull(z), self._pull(p)) - math.log(self.map.s)

    def regular_part_dz(self, z, p, n: int = 1):
        return self.base.regular_part_dz(self._pull(z), self._pull(p), n) * self.map.s**n

    def grad_green(self, z, p):
        return self.base.grad_green(self._pull(z), self._pull(p)) * self.map.s

    def robin(self, p) -> float:
        return self.base.robin(self._pull(p)) - math.log(self.map.s)

    def robin_derivative(self, p, alpha: int, beta: int):
        if alpha == beta == 0:
            return complex(self.robin(p))
        base = self.base.robin_derivative(self._pull(p), alpha, beta)
        return base * self.map.s ** (alpha + beta)

    def taylor_coefficient(self, p, n: int):
        if n == 0:
            return complex(self.robin(p))
        return self.base.taylor_coefficient(self._pull(p), n) * self.map.s**n


def make_evaluator(domain: Domain, backend: str = "auto", n_per_curve: int = 256):
    """Backend dispatch: closed form / series when available, else Nystrom."""
    if backend == "auto":
        if isinstance(domain, UnitDisc):
            return DiscClosedForm()
        if isinstance(domain, HalfPlane):
            return HalfPlaneClosedForm(domain)
        if isinstance(domain, Annulus):
            return AnnulusSeries(domain)
        if isinstance(domain, SmoothDomain):
            return NystromGreen(domain, n_per_curve)
        raise UnsupportedDomain(f"no evaluator for domain kind {domain.kind!r}")
    if backend == "closed":
        if isinstance(domain, UnitDisc):
            return DiscClosedForm()
        if isinstance(domain, HalfPlane):
            return HalfPlaneClosedForm(domain)
        raise UnsupportedDomain("closed forms exist for the disc and half planes only")
    if backend == "series":
        if isinstance(domain, Annulus):
            return AnnulusSeries(domain)
        raise UnsupportedDomain("series backend exists for the annulus only")
    if backend == "bie":
        if isinstance(domain, HalfPlane):
            raise UnsupportedDomain("the half plane has no boundary quadrature")
        return NystromGreen(domain, n_per_curve)
    raise ValueError(f"unknown backend {backend!r}")
