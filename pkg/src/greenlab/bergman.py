"""Bergman kernels for the disc and the annulus.

Disc: K(z,w) = 1/(pi (1 - z conj(w))^2).

Annulus A(r,1): the monomials z^n, n in Z, are orthogonal in the Bergman
space with ||z^n||^2 = pi (1 - r^(2n+2))/(n+1) for n != -1 and
||z^-1||^2 = -2 pi log r, giving

    K(z,w) = S(z conj(w)) / pi,
    S(zeta) = -1/(2 zeta log r) + 1/(1-zeta)^2 + r^2/(zeta - r^2)^2
              + sum_n (n r^(2n)/(1-r^(2n))) (zeta^(n-1) + r^(2n) zeta^(-n-1)),

after the slowly convergent parts are summed in closed form.  The series
converges on r^2 < |zeta| < 1, which covers interior z with w anywhere on
the closed annulus (needed for boundary zero searches).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import CoincidentPoints, UnsupportedDomain
from .geometry import Annulus, Domain, UnitDisc
from .green.annulus_series import AnnulusSeries, _truncation
from .green.closed_forms import DiscClosedForm


@dataclass(frozen=True)
class BergmanValue:
    value: complex
    backend: str


def _annulus_S(r: float, zeta, M: int | None = None):
    zeta = np.asarray(zeta, dtype=complex)
    L = math.log(r)
    M = _truncation(r) if M is None else M
    n = np.arange(1, M + 1)
    c = n * r ** (2 * n) / (1.0 - r ** (2 * n))
    out = (
        -1.0 / (2.0 * zeta * L)
        + 1.0 / (1.0 - zeta) ** 2
        + r**2 / (zeta - r**2) ** 2
    )
    accp = np.ones_like(zeta)
    accw = np.ones_like(zeta)
    rz = r**2 / zeta
    for i in range(M):
        accw = accw * rz
        out = out + c[i] * (accp + accw / zeta)
        accp = accp * zeta
    return out


def _annulus_S_prime(r: float, zeta: complex, M: int | None = None) -> complex:
    L = math.log(r)
    M = _truncation(r) if M is None else M
    out = (
        1.0 / (2.0 * zeta**2 * L)
        + 2.0 / (1.0 - zeta) ** 3
        - 2.0 * r**2 / (zeta - r**2) ** 3
    )
    for n in range(1, M + 1):
        c = n * r ** (2 * n) / (1.0 - r ** (2 * n))
        out += c * ((n - 1) * zeta ** (n - 2) - (n + 1) * r ** (2 * n) * zeta ** (-n - 2))
    return out


def bergman_kernel(domain: Domain, z: complex, w: complex) -> BergmanValue:
    if isinstance(domain, UnitDisc):
        return BergmanValue(1.0 / (math.pi * (1.0 - z * np.conj(w)) ** 2), "DiscClosedForm")
    if isinstance(domain, Annulus):
        zeta = z * np.conj(w)
        if not (domain.r**2 < abs(zeta) < 1.0 + 1e-12):
            raise UnsupportedDomain("z conj(w) outside the series convergence region")
        return BergmanValue(complex(_annulus_S(domain.r, zeta)) / math.pi, "AnnulusSeries")
    raise UnsupportedDomain("Bergman kernel implemented for the disc and the annulus")


def bergman_kernel_zero(domain: Annulus, zeta0: complex, seed: complex | None = None) -> complex:
    """Interior zero z0 of K(., zeta0) for a boundary point zeta0 (annulus)."""
    if not isinstance(domain, Annulus):
        raise UnsupportedDomain("kernel zeros implemented for the annulus")
    r = domain.r
    target = None
    # zeros of S lie on the negative real axis in (-1, -r^2); bracket and bisect
    xs = np.linspace(-0.999, -r**2 * 1.001, 4000)
    vals = np.real(_annulus_S(r, xs))
    for x1, x2, v1, v2 in zip(xs, xs[1:], vals, vals[1:]):
        if v1 == 0.0 or v1 * v2 < 0:
            target = 0.5 * (x1 + x2)
            break
    if target is None:
        raise UnsupportedDomain("no kernel zero found on the negative axis")
    zeta = complex(target) if seed is None else complex(seed * np.conj(zeta0))
    for _ in range(60):
        f = complex(_annulus_S(r, zeta))
        df = _annulus_S_prime(r, zeta)
        step = f / df
        zeta -= step
        if abs(step) < 1e-15:
            break
    return zeta / np.conj(zeta0)


def gram_schmidt_kernel(domain: Annulus, z: complex, w: complex, n_range: int = 32,
                        n_radial: int = 96, n_angular: int = 256) -> complex:
    """Brute-force kernel from numerically orthonormalized monomials.

    Inner products are computed by Gauss-Legendre x trapezoid quadrature over
    the annulus, the Gram matrix is Cholesky-factored, and the kernel is
    sum_k phi_k(z) conj(phi_k(w)).  Independent oracle for the series kernel.
    """
    if not isinstance(domain, Annulus):
        raise UnsupportedDomain("oracle implemented for the annulus")
    r = domain.r
    xg, wg = leggauss(n_radial)
    rho = 0.5 * (xg + 1.0) * (1.0 - r) + r
    wr = 0.5 * (1.0 - r) * wg
    powers = np.arange(-n_range, n_range + 1)
    # angular integral of z^m conj(z)^n vanishes unless m = n, but build the
    # full Gram matrix numerically anyway: that is the point of the oracle
    theta = np.linspace(0.0, 2 * np.pi, n_angular, endpoint=False)
    zs = np.multiply.outer(rho, np.exp(1j * theta)).ravel()
    wq = np.repeat(wr * rho, n_angular) * (2 * np.pi / n_angular)
    basis = zs[None, :] ** powers[:, None]
    gram = (basis * wq) @ np.conj(basis.T)
    chol = np.linalg.cholesky(gram)
    inv = np.linalg.inv(chol)
    phi_z = inv @ (z ** powers)
    phi_w = inv @ (w ** powers)
    return complex(phi_z @ np.conj(phi_w))


def bergman_green_identity_residual(domain: Domain, z: complex, w: complex) -> float:
    """|K(z,w) + (2/pi) d^2 G/dz d(conj w)|; vanishes for the true kernel."""
    if z == w:
        raise CoincidentPoints("identity checked off the diagonal")
    k = bergman_kernel(domain, z, w).value
    if isinstance(domain, UnitDisc):
        mixed = DiscClosedForm().d2_green_dz_dwbar(z, w)
    elif isinstance(domain, Annulus):
        mixed = AnnulusSeries(domain).d2_green_dz_dwbar(z, w)
    else:
        raise UnsupportedDomain("identity implemented for the disc and the annulus")
    return float(abs(k + (2.0 / math.pi) * mixed))
