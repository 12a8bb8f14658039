"""Smooth closed boundary curves as finite Fourier series.

A curve is gamma(theta) = sum_{|k| <= m} c_k e^{i k theta}, 2pi-periodic.
Tangents and curvatures come from term-wise differentiation, so they are
exact; trapezoidal quadrature on such curves is spectrally accurate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateCurve

_VALIDATION_GRID = 512
_MIN_SPEED = 1e-10


@dataclass(frozen=True)
class BoundaryCurve:
    """Closed curve given by complex Fourier coefficients c_{-m}..c_m."""

    coeffs: np.ndarray  # complex, length 2m+1, index j <-> mode j-m
    orientation: int = field(init=False, default=0)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size % 2 == 0:
            raise ValueError("coeffs must be a 1-d array of odd length c_{-m}..c_m")
        object.__setattr__(self, "coeffs", coeffs)
        theta = np.linspace(0.0, 2 * np.pi, _VALIDATION_GRID, endpoint=False)
        speed = np.abs(self.derivative(theta))
        if speed.min() < _MIN_SPEED * max(1.0, speed.max()):
            raise DegenerateCurve("|gamma'| vanishes on the validation grid")
        # signed area fixes the orientation: positive = counterclockwise
        pts = self.point(theta)
        dpts = self.derivative(theta)
        area = 0.5 * np.mean(np.imag(np.conj(pts) * dpts)) * 2 * np.pi
        object.__setattr__(self, "orientation", 1 if area > 0 else -1)
        self._check_simple(pts, speed)

    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2

    def _modes(self) -> np.ndarray:
        m = self.degree
        return np.arange(-m, m + 1)

    def point(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        phases = np.exp(1j * np.multiply.outer(theta, self._modes()))
        return phases @ self.coeffs

    def derivative(self, theta, order: int = 1) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        k = self._modes()
        factor = (1j * k) ** order
        phases = np.exp(1j * np.multiply.outer(theta, k))
        return phases @ (factor * self.coeffs)

    def tangent(self, theta) -> np.ndarray:
        d = self.derivative(theta)
        return d / np.abs(d)

    def normal(self, theta) -> np.ndarray:
        """Unit normal pointing away from the side the curve keeps on its left."""
        return -1j * self.tangent(theta)

    def curvature(self, theta) -> np.ndarray:
        """Signed curvature w.r.t. the parametrization orientation."""
        d1 = self.derivative(theta, 1)
        d2 = self.derivative(theta, 2)
        return np.imag(np.conj(d1) * d2) / np.abs(d1) ** 3

    def perimeter(self, n: int = 4096) -> float:
        theta = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
        return float(np.abs(self.derivative(theta)).mean() * 2 * np.pi)

    def reversed(self) -> "BoundaryCurve":
        """Same trace with opposite orientation (theta -> -theta)."""
        m = self.degree
        return BoundaryCurve(self.coeffs[::-1].copy() if m else self.coeffs.copy())

    def affine_image(self, scale: complex, shift: complex) -> "BoundaryCurve":
        """Image under z -> scale*z + shift; still a finite Fourier series."""
        coeffs = self.coeffs * scale
        coeffs[self.degree] += shift
        return BoundaryCurve(coeffs)

    def _check_simple(self, pts: np.ndarray, speed: np.ndarray) -> None:
        # coarse self-intersection screen: well-separated parameters must
        # give points further apart than a fraction of the local arc step
        n = pts.size
        step = 2 * np.pi / n
        idx = np.arange(n)
        di = np.abs(idx[:, None] - idx[None, :])
        di = np.minimum(di, n - di)
        far = di > 8
        dist = np.abs(pts[:, None] - pts[None, :])
        floor = 0.05 * speed.min() * step * 8
        if np.any(dist[far] < floor):
            raise ValueError("curve fails the simplicity screen")


def circle(radius: float, center: complex = 0.0, clockwise: bool = False) -> BoundaryCurve:
    coeffs = np.zeros(3, dtype=complex)
    coeffs[1] = center
    coeffs[0 if clockwise else 2] = radius
    return BoundaryCurve(coeffs)


def curve_from_samples(points: np.ndarray, degree: int) -> BoundaryCurve:
    """Least-squares-free Fourier fit: FFT of equispaced samples, truncated."""
    points = np.asarray(points, dtype=complex)
    n = points.size
    if 2 * degree + 1 > n:
        raise ValueError("need at least 2*degree+1 samples")
    hat = np.fft.fft(points) / n
    coeffs = np.zeros(2 * degree + 1, dtype=complex)
    coeffs[degree] = hat[0]
    for k in range(1, degree + 1):
        coeffs[degree + k] = hat[k]
        coeffs[degree - k] = hat[n - k]
    return BoundaryCurve(coeffs)


@dataclass(frozen=True)
class QuadratureSet:
    """Trapezoidal boundary quadrature: nodes with geometric data per node."""

    nodes: np.ndarray          # complex positions
    tangents: np.ndarray       # unit tangents
    normals: np.ndarray        # unit outward normals
    weights: np.ndarray        # arclength weights, positive
    curvatures: np.ndarray     # signed curvature per node
    dgamma: np.ndarray         # gamma'(theta_j) (complex velocity)
    thetas: np.ndarray
    curve_index: np.ndarray    # which curve each node belongs to
    curves: tuple
    n_per_curve: int

    @property
    def total_length(self) -> float:
        return float(self.weights.sum())

    def curve_slice(self, i: int) -> slice:
        return slice(i * self.n_per_curve, (i + 1) * self.n_per_curve)


def build_quadrature(curves, n: int) -> QuadratureSet:
    if n < 16 or n % 2:
        raise ValueError("node count per curve must be even and >= 16")
    theta = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    nodes, tangents, normals, weights, kappas, dgam, thetas, idx = [], [], [], [], [], [], [], []
    for i, curve in enumerate(curves):
        d1 = curve.derivative(theta)
        speed = np.abs(d1)
        if speed.min() < 1e-12:
            raise DegenerateCurve("vanishing tangent at a quadrature node")
        nodes.append(curve.point(theta))
        tangents.append(d1 / speed)
        normals.append(-1j * d1 / speed)
        weights.append(speed * (2 * np.pi / n))
        kappas.append(curve.curvature(theta))
        dgam.append(d1)
        thetas.append(theta.copy())
        idx.append(np.full(n, i))
    return QuadratureSet(
        nodes=np.concatenate(nodes),
        tangents=np.concatenate(tangents),
        normals=np.concatenate(normals),
        weights=np.concatenate(weights),
        curvatures=np.concatenate(kappas),
        dgamma=np.concatenate(dgam),
        thetas=np.concatenate(thetas),
        curve_index=np.concatenate(idx),
        curves=tuple(curves),
        n_per_curve=n,
    )
