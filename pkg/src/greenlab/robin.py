"""Robin function, capacity density, and Taylor data of the regular part.

Two routes are implemented for everything and cross-checked in the tests:
analytic formulas where a backend has them, and the integral representations
(circle means of G for the Robin constant, the double Poisson integral over a
torus of angles for derivatives, Fourier extraction on a circle for the
Taylor coefficients of the holomorphic completion).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DiscNotContained,
    GreenLabError,
    PoleOnCircle,
    RadiusTooSmall,
    StepTooLarge,
    CoincidentPoints,
)
from .geometry import Domain


def default_radius(domain: Domain, p: complex) -> float:
    """Averaging radius keeping B(p, r) well inside the domain."""
    delta, _ = domain.distance(p)
    return min(0.45 * delta, 0.05 * domain.scale)


def _require_disc(domain: Domain, q0: complex, r: float) -> None:
    delta, _ = domain.distance(q0)
    if r <= 0 or r >= delta:
        raise DiscNotContained(f"B({q0}, {r}) is not compactly contained (dist {delta})")


def robin_constant(eval_, p: complex, r: float, n_angles: int = 256) -> float:
    """Robin constant by the circle mean log r + avg_theta G(p + r e^{i t}, p)."""
    domain = eval_.domain
    p = domain.require_inside(complex(p))
    _require_disc(domain, p, r)
    theta = np.linspace(0.0, 2 * np.pi, max(n_angles, 128), endpoint=False)
    circle = p + r * np.exp(1j * theta)
    g = np.asarray(eval_.green(circle, p), dtype=float)
    return math.log(r) + float(g.mean())


def robin_value(eval_, p: complex) -> float:
    """Backend's best Robin constant (analytic if available, else circle mean)."""
    if hasattr(eval_, "robin"):
        return eval_.robin(p)
    return robin_constant(eval_, p, default_radius(eval_.domain, p))


def _poisson_factor_derivatives(p: complex, q0: complex, r: float,
                                theta: np.ndarray, a: int, b: int) -> np.ndarray:
    """(d/dp)^a (d/dpbar)^b of the Poisson kernel factor at angle theta.

    P(p) = (r^2 - |p - q0|^2)/|q0 + r e^{i t} - p|^2.  Pure derivatives are
    rational: d^a P = a! r e^{i t}/(w - p)^{a+1}; mixed ones vanish.
    """
    w = q0 + r * np.exp(1j * theta)
    if a == 0 and b == 0:
        return (r**2 - abs(p - q0) ** 2) / np.abs(w - p) ** 2
    if b == 0:
        return math.factorial(a) * r * np.exp(1j * theta) / (w - p) ** (a + 1)
    if a == 0:
        return math.factorial(b) * r * np.exp(-1j * theta) / np.conj(w - p) ** (b + 1)
    return np.zeros_like(theta, dtype=complex)


def robin_derivatives(eval_, p: complex, alpha: int, beta: int,
                      q0: complex | None = None, r: float | None = None,
                      n_angles: int = 128) -> complex:
    """Wirtinger derivative of the Robin function by the double Poisson integral.

    Samples H on the torus (q0 + r e^{i t}, q0 + r e^{i s}) and pairs it with
    the explicitly differentiated product of Poisson kernels; trapezoid rule
    in both angles.
    """
    domain = eval_.domain
    p = domain.require_inside(complex(p))
    q0 = p if q0 is None else complex(q0)
    r = default_radius(domain, q0) if r is None else float(r)
    _require_disc(domain, q0, r)
    if abs(p - q0) >= r - 1e-14:
        raise PoleOnCircle("evaluation point must lie strictly inside the circle")
    n = max(n_angles, 128)
    theta = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    ring = q0 + r * np.exp(1j * theta)
    h = np.empty((n, n))
    for j, w in enumerate(ring):
        h[:, j] = eval_.regular_part(ring, w)
    total = 0.0 + 0.0j
    for a in range(alpha + 1):
        for b in range(beta + 1):
            if a and b:
                continue
            a2, b2 = alpha - a, beta - b
            if a2 and b2:
                continue
            coeff = math.comb(alpha, a) * math.comb(beta, b)
            t1 = _poisson_factor_derivatives(p, q0, r, theta, a, b)
            t2 = _poisson_factor_derivatives(p, q0, r, theta, a2, b2)
            total += coeff * (t1 @ h @ t2) / n**2
    if alpha == beta == 0:
        return complex(total.real)
    return complex(total)


def capacity_density(eval_, p: complex) -> float:
    return math.exp(-robin_value(eval_, p))


def normalized_robin(eval_, domain: Domain, p: complex) -> float:
    """lambda(p) = Lambda(p) - log(-psi(p)); bounded up to the boundary."""
    p = domain.require_inside(complex(p))
    return robin_value(eval_, p) - math.log(-domain.psi_jet(p).psi)


def taylor_coefficients(eval_, p: complex, n_max: int, rho: float | None = None,
                        n_angles: int = 512, check_second_radius: bool = True) -> list[complex]:
    """Coefficients c_0..c_n_max of the holomorphic completion of H around p.

    H(p + rho e^{i t}, p) has k-th Fourier coefficient c_k rho^k / 2 for k >= 1
    and mean c_0, so one FFT on a circle yields all coefficients; a second
    radius guards against an inadequate rho.
    """
    domain = eval_.domain
    p = domain.require_inside(complex(p))
    if n_max > 16:
        raise ValueError("coefficient extraction supported for n_max <= 16")
    if rho is None:
        rho = default_radius(domain, p)
    if rho < 1e-3 * 1e-3 * domain.scale:  # 1e-3 of diameter in relative scale
        raise RadiusTooSmall("extraction radius below the resolvable floor")
    _require_disc(domain, p, rho)

    def extract(radius: float) -> np.ndarray:
        theta = np.linspace(0.0, 2 * np.pi, n_angles, endpoint=False)
        samples = np.asarray(eval_.regular_part(p + radius * np.exp(1j * theta), p))
        spec = np.fft.fft(samples) / n_angles
        out = np.empty(n_max + 1, dtype=complex)
        out[0] = spec[0].real
        for k in range(1, n_max + 1):
            out[k] = 2.0 * spec[k] / radius**k
        return out

    coeffs = extract(rho)
    if check_second_radius:
        other = extract(0.7 * rho)
        scale = np.maximum(np.abs(coeffs), 1.0)
        disagreement = float(np.abs(coeffs - other).max() / scale.max())
        if disagreement > 1e-6:
            raise GreenLabError(
                f"coefficient extraction radius-dependent (disagreement {disagreement:.2e})"
            )
    return [complex(c) for c in coeffs]


def taylor_coefficient_integral(eval_, p: complex, n: int, r: float | None = None,
                                n_angles: int = 128) -> complex:
    """Cross-check for c_n via the torus mean of the n-th z-derivative of H.

    At the circle center the double Poisson kernel is 1, so
    c_n(p) = (2/n!) * mean over the torus of d^n H(p + r e^{i t}, p + r e^{i s}).
    """
    domain = eval_.domain
    p = domain.require_inside(complex(p))
    r = default_radius(domain, p) if r is None else float(r)
    _require_disc(domain, p, r)
    theta = np.linspace(0.0, 2 * np.pi, n_angles, endpoint=False)
    ring = p + r * np.exp(1j * theta)
    acc = 0.0 + 0.0j
    for w in ring:
        acc += np.asarray(eval_.regular_part_dz(ring, w, n)).mean()
    return 2.0 * acc / (n_angles * math.factorial(n))


def grad_lambda_fd(eval_, domain: Domain, p: complex, h: float | None = None) -> complex:
    """d lambda / dz by central differences with one Richardson level."""
    p = domain.require_inside(complex(p))
    delta, _ = domain.distance(p)
    if h is None:
        h = min(1e-4 * delta, 1e-5 * domain.scale)
    if h >= 0.5 * delta:
        raise StepTooLarge("finite-difference step reaches the boundary")

    def lam(q: complex) -> float:
        return normalized_robin(eval_, domain, q)

    def central(step: float) -> complex:
        dx = (lam(p + step) - lam(p - step)) / (2 * step)
        dy = (lam(p + 1j * step) - lam(p - 1j * step)) / (2 * step)
        return 0.5 * (dx - 1j * dy)

    d1 = central(h)
    d2 = central(h / 2)
    return (4.0 * d2 - d1) / 3.0


def sinh_identity_residual(eval_, p: complex, a: complex) -> float:
    """Lambda(p) + log(|dG(p,a)| / sinh G(p,a)); tends to 0 as p -> boundary."""
    p = eval_.domain.require_inside(complex(p))
    a = eval_.domain.require_inside(complex(a))
    if p == a:
        raise CoincidentPoints("residual undefined at the pole")
    g = eval_.green(p, a)
    grad = eval_.grad_green(p, a)
    return robin_value(eval_, p) + math.log(abs(grad) / math.sinh(g))


@dataclass
class RobinReport:
    """Robin data at one query point."""

    p: complex
    robin: float
    capacity: float
    lambda_norm: float
    derivatives: dict = field(default_factory=dict)   # (alpha, beta) -> complex
    coefficients: list = field(default_factory=list)  # c_0 .. c_n

    def to_dict(self) -> dict:
        return {
            "p": [self.p.real, self.p.imag],
            "Lambda": self.robin,
            "capacity": self.capacity,
            "lambda_norm": self.lambda_norm,
            "dLambda": {
                f"{a},{b}": [v.real, v.imag] for (a, b), v in sorted(self.derivatives.items())
            },
            "c_n": [[c.real, c.imag] for c in self.coefficients],
        }


def build_report(eval_, domain: Domain, p: complex, order: int = 2, n_max: int = 4) -> RobinReport:
    p = domain.require_inside(complex(p))
    lam = robin_value(eval_, p)
    derivs = {}
    for total in range(1, order + 1):
        for a in range(total + 1):
            b = total - a
            if hasattr(eval_, "robin_derivative"):
                derivs[(a, b)] = complex(eval_.robin_derivative(p, a, b))
            else:
                derivs[(a, b)] = robin_derivatives(eval_, p, a, b)
    coeffs = taylor_coefficients(eval_, p, n_max)
    return RobinReport(
        p=p,
        robin=lam,
        capacity=math.exp(-lam),
        lambda_norm=normalized_robin(eval_, domain, p),
        derivatives=derivs,
        coefficients=coeffs,
    )
