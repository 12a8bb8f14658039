"""Separation-of-variables solution of the Dirichlet problem on an annulus.

For A = {r < |z| < 1} the regular part H(z,p) of the Green's function solves
the Dirichlet problem with data log|y - p| on both circles.  Matching Fourier
modes on the two circles gives Laurent coefficients in closed form.  Summing
the slowly decaying parts of those series analytically (they are logarithms)
leaves a tail that decays like r^(2n), so a fixed truncation M with
r^(2M) < 1e-16 is uniformly accurate over the whole closed annulus:

H(z,p) = log|p| log|z| / log r
         + Re[ log(1-w1) - log(1-w2) - log(1-w3) + log(1-w4) ] + Re T(z,p)

with w1 = conj(p) z, w2 = r^2 z / p, w3 = r^2 p / z, w4 = r^2/(conj(p) z) and
T = sum_n e_n [w2^n - w1^n + w3^n - w4^n], e_n = r^(2n) / (n (1 - r^(2n))).

The Robin function depends on t = |p|^2 only:

Lambda(t) = (log t)^2/(4 log r) + log(1-t) + log(1-r^2/t) - 2 log(1-r^2)
            + sum_n e_n [2 r^(2n) - t^n - (r^2/t)^n].
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import CoincidentPoints
from ..geometry import Annulus


def _truncation(r: float) -> int:
    return int(math.ceil(9.0 * math.log(10.0) / math.log(1.0 / r))) + 8


class AnnulusSeries:
    backend = "Series"

    def __init__(self, domain: Annulus, truncation: int | None = None):
        self.domain = domain
        self.r = domain.r
        self.M = truncation if truncation is not None else _truncation(self.r)
        n = np.arange(1, self.M + 1)
        self._n = n
        r2n = self.r ** (2 * n)
        self._r2n = r2n
        self._e = r2n / (n * (1.0 - r2n))
        self._log_r = math.log(self.r)

    # -- regular part in the first variable ---------------------------------

    def _w(self, z, p):
        pb = np.conj(p)
        r2 = self.r**2
        return pb * z, r2 * z / p, r2 * p / z, r2 / (pb * z)

    def regular_part(self, z, p):
        """H(z,p); z may be a numpy array, p is a scalar interior point."""
        z = np.asarray(z, dtype=complex)
        p = complex(p)
        w1, w2, w3, w4 = self._w(z, p)
        logs = np.log(1.0 - w1) - np.log(1.0 - w2) - np.log(1.0 - w3) + np.log(1.0 - w4)
        # tail: sum_n e_n (w2^n - w1^n + w3^n - w4^n); all |w| bounded by 1
        tail = np.zeros_like(z, dtype=complex)
        acc1 = np.ones_like(z, dtype=complex)
        acc2 = np.ones_like(z, dtype=complex)
        acc3 = np.ones_like(z, dtype=complex)
        acc4 = np.ones_like(z, dtype=complex)
        for k in range(self.M):
            acc1 = acc1 * w1
            acc2 = acc2 * w2
            acc3 = acc3 * w3
            acc4 = acc4 * w4
            tail += self._e[k] * (acc2 - acc1 + acc3 - acc4)
        value = (
            math.log(abs(p)) * np.log(np.abs(z)) / self._log_r
            + np.real(logs)
            + np.real(tail)
        )
        return value if value.shape else float(value)

    def regular_part_dz(self, z, p, n: int = 1):
        """d^n H / dz^n (Wirtinger); equals h^(n)(z)/2 for the completion h."""
        if n < 1:
            raise ValueError("derivative order must be >= 1")
        return self._h_derivative(z, p, n) / 2.0

    def _h_derivative(self, z, p, k: int):
        """k-th z-derivative of the holomorphic completion of H."""
        z = np.asarray(z, dtype=complex)
        p = complex(p)
        pb = np.conj(p)
        r2 = self.r**2
        w1, w2, w3, w4 = self._w(z, p)
        c3, c4 = r2 * p, r2 / pb
        fk = math.factorial(k - 1)
        sgn = (-1.0) ** (k - 1)
        out = (math.log(abs(p)) / self._log_r) * sgn * fk / z**k
        out += -fk * pb**k / (1.0 - w1) ** k
        out += fk * (r2 / p) ** k / (1.0 - w2) ** k
        # -log(1-w3) = -log(z - c3) + log z ; +log(1-w4) = log(z - c4) - log z
        out += -sgn * fk * (1.0 / (z - c3) ** k - 1.0 / z**k)
        out += sgn * fk * (1.0 / (z - c4) ** k - 1.0 / z**k)
        # tail: d^k w^n = fall(n,k) w^n / z^k for w ~ z, fall(-n,k) w^n / z^k for w ~ 1/z
        nn = self._n.astype(float)
        fall_pos = np.ones_like(nn)
        fall_neg = np.ones_like(nn)
        for j in range(k):
            fall_pos *= nn - j
            fall_neg *= -nn - j
        tail = np.zeros_like(z, dtype=complex)
        acc1 = np.ones_like(z, dtype=complex)
        acc2 = np.ones_like(z, dtype=complex)
        acc3 = np.ones_like(z, dtype=complex)
        acc4 = np.ones_like(z, dtype=complex)
        for i in range(self.M):
            acc1 = acc1 * w1
            acc2 = acc2 * w2
            acc3 = acc3 * w3
            acc4 = acc4 * w4
            tail += self._e[i] * (fall_pos[i] * (acc2 - acc1) + fall_neg[i] * (acc3 - acc4))
        out += tail / z**k
        return out if out.shape else complex(out)

    def green(self, z, p):
        z_arr = np.asarray(z, dtype=complex)
        p = complex(p)
        if np.any(z_arr == p):
            raise CoincidentPoints("Green's function has a pole at z == p")
        value = -np.log(np.abs(z_arr - p)) + self.regular_part(z_arr, p)
        return value if np.ndim(z) else float(value)

    def grad_green(self, z, p):
        z_arr = np.asarray(z, dtype=complex)
        p = complex(p)
        if np.any(z_arr == p):
            raise CoincidentPoints("gradient undefined at the pole")
        value = -0.5 / (z_arr - p) + self.regular_part_dz(z_arr, p, 1)
        return value if np.ndim(z) else complex(value)

    def d2_green_dz_dwbar(self, z, w):
        """Mixed derivative d^2 G / dz d(conj w); the Bergman kernel source."""
        z = np.asarray(z, dtype=complex)
        w = complex(w)
        wb = np.conj(w)
        r2 = self.r**2
        zeta = z * wb
        tail = np.zeros_like(z, dtype=complex)
        accp = np.ones_like(z, dtype=complex)
        accm = np.ones_like(z, dtype=complex)
        for i in range(self.M):
            accp = accp * zeta
            accm = accm * (r2 / zeta)
            tail += self._e[i] * self._n[i] ** 2 * (accp + accm)
        out = 0.5 * (
            1.0 / (2.0 * zeta * self._log_r)
            - 1.0 / (1.0 - zeta) ** 2
            - r2 / (zeta - r2) ** 2
            - tail / zeta
        )
        return out if out.shape else complex(out)

    # -- Robin function ------------------------------------------------------

    def robin(self, p) -> float:
        p = self.domain.require_inside(complex(p))
        return self._F(abs(p) ** 2, 0)

    def robin_derivative(self, p: complex, alpha: int, beta: int) -> complex:
        """Wirtinger derivatives of the Robin function, alpha + beta <= 3."""
        p = self.domain.require_inside(complex(p))
        t = abs(p) ** 2
        pb = np.conj(p)
        key = (alpha, beta)
        if key == (0, 0):
            return complex(self._F(t, 0))
        F1 = self._F(t, 1)
        if key == (1, 0):
            return F1 * pb
        if key == (0, 1):
            return F1 * p
        F2 = self._F(t, 2)
        if key == (1, 1):
            return complex(F1 + t * F2)
        if key == (2, 0):
            return F2 * pb**2
        if key == (0, 2):
            return F2 * p**2
        F3 = self._F(t, 3)
        if key == (2, 1):
            return pb * (2.0 * F2 + t * F3)
        if key == (1, 2):
            return p * (2.0 * F2 + t * F3)
        if key == (3, 0):
            return F3 * pb**3
        if key == (0, 3):
            return F3 * p**3
        raise ValueError("series backend tabulates Robin derivatives up to order 3")

    def _F(self, t: float, order: int) -> float:
        r2 = self.r**2
        lr = self._log_r
        n = self._n
        e = self._e
        r2n = self._r2n
        if order == 0:
            tail = float(np.sum(e * (2.0 * r2n - t**n - (r2 / t) ** n)))
            return (
                math.log(t) ** 2 / (4.0 * lr)
                + math.log1p(-t)
                + math.log1p(-r2 / t)
                - 2.0 * math.log1p(-r2)
                + tail
            )
        if order == 1:
            tail = float(np.sum(e * (-n * t ** (n - 1) + n * (r2 / t) ** n / t)))
            return (
                math.log(t) / (2.0 * t * lr)
                - 1.0 / (1.0 - t)
                + r2 / (t * (t - r2))
                + tail
            )
        if order == 2:
            D = t * t - r2 * t
            Dp = 2.0 * t - r2
            tail = float(np.sum(e * (-n * (n - 1) * t ** (n - 2)
                                     - n * (n + 1) * (r2 / t) ** n / t**2)))
            return (
                (1.0 - math.log(t)) / (2.0 * t**2 * lr)
                - 1.0 / (1.0 - t) ** 2
                - r2 * Dp / D**2
                + tail
            )
        if order == 3:
            D = t * t - r2 * t
            Dp = 2.0 * t - r2
            tail = float(np.sum(e * (-n * (n - 1) * (n - 2) * t ** (n - 3)
                                     + n * (n + 1) * (n + 2) * (r2 / t) ** n / t**3)))
            return (
                -(3.0 - 2.0 * math.log(t)) / (2.0 * t**3 * lr)
                - 2.0 / (1.0 - t) ** 3
                + 2.0 * r2 * (Dp**2 - D) / D**3
                + tail
            )
        raise ValueError("Robin radial profile implemented up to third derivative")

    def taylor_coefficient(self, p: complex, n: int) -> complex:
        """Coefficient c_n of the holomorphic completion of H around p."""
        p = self.domain.require_inside(complex(p))
        if n == 0:
            return complex(self.robin(p))
        return complex(self._h_derivative(p, p, n)) / math.factorial(n)
