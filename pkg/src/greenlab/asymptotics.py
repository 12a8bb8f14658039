"""Boundary-approach experiments for the quantitative asymptotics.

Each verify_* operation walks a geometric approach sequence p_j -> p0 in dD,
computes a scale-corrected quantity ("measured"), and reports it against the
predicted boundary limit, which depends on the domain only through the
defining-function gradient at p0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capmetric import curvature
from .errors import RescaleTooExtreme
from .geometry import Domain, SmoothDomain, rescale
from .green import NystromGreen
from .robin import (
    capacity_density,
    robin_derivatives,
    robin_value,
    taylor_coefficients,
)


@dataclass(frozen=True)
class AsymptoticsRow:
    j: int
    p: complex
    measured: complex
    predicted: complex

    @property
    def residual(self) -> float:
        return abs(self.measured - self.predicted)

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "re p": self.p.real,
            "im p": self.p.imag,
            "re measured": complex(self.measured).real,
            "im measured": complex(self.measured).imag,
            "re predicted": complex(self.predicted).real,
            "im predicted": complex(self.predicted).imag,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class ApproachSequence:
    p0: complex
    points: tuple
    deltas: tuple

    def __iter__(self):
        return iter(enumerate(self.points))


def approach_sequence(domain: Domain, p0: complex, J: int = 12,
                      delta0: float | None = None, tangential: bool = False) -> ApproachSequence:
    """p_j = p0 + delta0 2^-j (inward normal), optionally with a tangential
    offset delta_j^(3/2) to exercise non-normal approaches."""
    p0 = complex(p0)
    normal = domain.inward_normal(p0)
    if delta0 is None:
        reach = domain.reach(p0)
        delta0 = 0.25 * min(reach, domain.scale)
    pts, deltas = [], []
    for j in range(J + 1):
        d = delta0 * 2.0**-j
        p = p0 + d * normal
        if tangential:
            p = p + (1j * normal) * d**1.5
        pts.append(domain.require_inside(p))
        deltas.append(d)
    return ApproachSequence(p0=p0, points=tuple(pts), deltas=tuple(deltas))


def _dpsi0(domain: Domain, p0: complex) -> complex:
    return domain.psi_jet(p0).d_psi


def _robin_derivative(eval_, p: complex, alpha: int, beta: int) -> complex:
    if hasattr(eval_, "robin_derivative"):
        return complex(eval_.robin_derivative(p, alpha, beta))
    return robin_derivatives(eval_, p, alpha, beta)


def verify_robin_limit(eval_, domain: Domain, seq: ApproachSequence) -> list[AsymptoticsRow]:
    predicted = -math.log(abs(_dpsi0(domain, seq.p0)))
    rows = []
    for j, p in seq:
        measured = robin_value(eval_, p) - math.log(-domain.psi_jet(p).psi)
        rows.append(AsymptoticsRow(j=j, p=p, measured=measured, predicted=predicted))
    return rows


def verify_robin_derivative_limits(eval_, domain: Domain, seq: ApproachSequence,
                                   alpha: int, beta: int) -> list[AsymptoticsRow]:
    if alpha == beta == 0:
        raise ValueError("use verify_robin_limit for the (0,0) case")
    d0 = _dpsi0(domain, seq.p0)
    m = alpha + beta
    predicted = -math.factorial(m - 1) * d0**alpha * np.conj(d0) ** beta
    rows = []
    for j, p in seq:
        mpsi = -domain.psi_jet(p).psi
        measured = _robin_derivative(eval_, p, alpha, beta) * mpsi**m
        rows.append(AsymptoticsRow(j=j, p=p, measured=measured, predicted=predicted))
    return rows


def verify_capacity_limit(eval_, domain: Domain, seq: ApproachSequence) -> list[AsymptoticsRow]:
    predicted = abs(_dpsi0(domain, seq.p0))
    rows = []
    for j, p in seq:
        measured = capacity_density(eval_, p) * (-domain.psi_jet(p).psi)
        rows.append(AsymptoticsRow(j=j, p=p, measured=measured, predicted=predicted))
    return rows


def verify_curvature_limit(eval_, domain: Domain, seq: ApproachSequence) -> list[AsymptoticsRow]:
    rows = []
    for j, p in seq:
        rows.append(AsymptoticsRow(j=j, p=p, measured=curvature(eval_, p), predicted=-4.0))
    return rows


def _cn(eval_, p: complex, n: int) -> complex:
    return taylor_coefficients(eval_, p, n, check_second_radius=False)[n]


def _wirtinger_fd(func, p: complex, alpha: int, beta: int, h: float) -> complex:
    if alpha == 0 and beta == 0:
        return func(p)

    def reduce_once(g, conjugate: bool):
        def out(q: complex) -> complex:
            gx = (g(q + h) - g(q - h)) / (2 * h)
            gy = (g(q + 1j * h) - g(q - 1j * h)) / (2 * h)
            return 0.5 * (gx + 1j * gy) if conjugate else 0.5 * (gx - 1j * gy)

        return out

    g = func
    for _ in range(alpha):
        g = reduce_once(g, conjugate=False)
    for _ in range(beta):
        g = reduce_once(g, conjugate=True)
    return g(p)


def verify_cn_limits(eval_, domain: Domain, seq: ApproachSequence, n: int,
                     alpha: int = 0, beta: int = 0) -> list[AsymptoticsRow]:
    if n < 1 or n + alpha + beta > 5:
        raise ValueError("supported range: n >= 1 and n + alpha + beta <= 5")
    d0 = _dpsi0(domain, seq.p0)
    m = alpha + beta
    predicted = (
        -math.factorial(n + m - 1) / math.factorial(n)
        * d0 ** (n + alpha) * np.conj(d0) ** beta
    )
    rows = []
    for j, p in seq:
        mpsi = -domain.psi_jet(p).psi
        if m == 0:
            value = _cn(eval_, p, n)
        else:
            h = seq.deltas[j] / 10.0
            coarse = _wirtinger_fd(lambda q: _cn(eval_, q, n), p, alpha, beta, h)
            fine = _wirtinger_fd(lambda q: _cn(eval_, q, n), p, alpha, beta, h / 2)
            value = (4.0 * fine - coarse) / 3.0
        measured = value * mpsi ** (n + m)
        rows.append(AsymptoticsRow(j=j, p=p, measured=measured, predicted=predicted))
    return rows


def _required_nodes(domain: Domain, p: complex, margin: float = 28.0) -> int:
    """Node count resolving Dirichlet data with a log singularity at p.

    The data is analytic in a parameter strip of half-width ~ dist(p, curve)
    divided by the parametrization speed; aliasing decays like exp(-strip N).
    """
    theta = np.linspace(0.0, 2 * np.pi, 512, endpoint=False)
    strip = math.inf
    for curve in domain.boundary_curves():
        pts = curve.point(theta)
        speed = np.abs(curve.derivative(theta))
        strip = min(strip, float((np.abs(pts - p) / speed.max()).min()))
    n = int(2 ** math.ceil(math.log2(margin / strip)))
    return max(n, 256)


def verify_rescaled_convergence(domain: Domain, p0: complex, seq: ApproachSequence,
                                alpha: int = 0, beta: int = 0,
                                node_cap: int = 4096) -> list[AsymptoticsRow]:
    """Robin data at 0 of the blown-up domains T_j(D) against the half-plane.

    Each rescaled domain is solved with a dense Nystrom system whose size
    grows like 1/delta_j (the pulled-back data steepens as fast as the
    original); RescaleTooExtreme guards the node budget.
    """
    d0 = _dpsi0(domain, p0)
    m = alpha + beta
    if m == 0:
        predicted = complex(-math.log(abs(d0)))
    else:
        predicted = -math.factorial(m - 1) * d0**alpha * np.conj(d0) ** beta
    curves = domain.boundary_curves()
    rows = []
    for j, p in seq:
        n_req = _required_nodes(domain, p)
        if n_req > node_cap:
            raise RescaleTooExtreme(
                f"step j={j} needs {n_req} nodes per curve (cap {node_cap})"
            )
        tmap, _ = rescale(domain, p)
        image = SmoothDomain([c.affine_image(1.0 / tmap.s, -tmap.p / tmap.s) for c in curves])
        ev = NystromGreen(image, n_per_curve=n_req)
        if m == 0:
            measured = complex(ev.robin(0.0))
        else:
            measured = robin_derivatives(ev, 0.0, alpha, beta)
        rows.append(AsymptoticsRow(j=j, p=p, measured=measured, predicted=predicted))
    return rows


def residual_ratios(rows: list[AsymptoticsRow]) -> list[float]:
    res = [row.residual for row in rows]
    return [b / a if a > 0 else math.nan for a, b in zip(res, res[1:])]


def bridging_identity_gap(eval_, domain: Domain, p: complex,
                          alpha: int = 0, beta: int = 0) -> float:
    """|rescaled Robin data at 0 - scaled Robin data at p| via exact transport.

    The affine change of variables gives Lambda_{T_p D}(0) = lambda(p) and
    d^(a+b) Lambda_{T_p D}(0) = d^(a+b) Lambda(p) (-psi(p))^(a+b); this helper
    cross-checks the dense rescaled solve against that identity.
    """
    from .green import AffineImageGreen

    tmap, _ = rescale(domain, p)
    image_eval = AffineImageGreen(eval_, tmap)
    mpsi = -domain.psi_jet(p).psi
    if alpha == beta == 0:
        lhs = image_eval.robin(0.0)
        rhs = robin_value(eval_, p) - math.log(mpsi)
    else:
        lhs = image_eval.robin_derivative(0.0, alpha, beta)
        rhs = _robin_derivative(eval_, p, alpha, beta) * mpsi ** (alpha + beta)
    return abs(lhs - rhs)
