"""Critical points of the Green's function and the variable-domain experiment.

dG/dz(., zeta) is holomorphic away from the pole (G is harmonic), so its
zeros respond to damped complex Newton iteration; multi-start over an
interior grid finds all of them (a domain of connectivity n carries n - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bergman import bergman_kernel, bergman_kernel_zero
from .errors import BadNormalizer, TrackingLost
from .geometry import Annulus, Domain
from .green import make_evaluator


@dataclass(frozen=True)
class CriticalPointRecord:
    z: complex
    zeta: complex
    residual: float
    newton_iters: int


def grad_green(eval_, z: complex, zeta: complex) -> complex:
    return eval_.grad_green(z, zeta)


def _grad2(eval_, z: complex, zeta: complex) -> complex:
    return 0.5 / (z - zeta) ** 2 + eval_.regular_part_dz(z, zeta, 2)


def _newton(eval_, domain: Domain, z0: complex, zeta: complex,
            tol: float = 1e-12, max_iter: int = 50):
    z = complex(z0)
    f = grad_green(eval_, z, zeta)
    for it in range(1, max_iter + 1):
        df = _grad2(eval_, z, zeta)
        if df == 0:
            return None
        step = f / df
        # damped step halving on residual increase
        for _ in range(20):
            z_new = z - step
            if domain.contains(z_new) and abs(z_new - zeta) > 1e-12:
                f_new = grad_green(eval_, z_new, zeta)
                if abs(f_new) <= abs(f):
                    break
            step *= 0.5
        else:
            # stuck at the rounding floor of dG; accept if already converged
            if abs(f) < tol:
                return z, abs(f), it
            return None
        converged = abs(step) < 1e-13 * max(1.0, abs(z))
        z, f = z_new, f_new
        if abs(f) < tol and converged:
            return z, abs(f), it
    if abs(f) < tol:
        return z, abs(f), max_iter
    return None


def find_critical_points(eval_, domain: Domain, zeta: complex, grid_n: int = 32,
                         dedupe: float = 1e-6, residual_tol: float = 1e-10,
                         seed: int = 42) -> list[CriticalPointRecord]:
    """Multi-start Newton on dG(., zeta) = 0 over an interior grid."""
    zeta = domain.require_inside(complex(zeta))
    rng = np.random.default_rng(seed)
    xs = np.linspace(-1.0, 1.0, grid_n) * domain.scale / 2
    starts = []
    for x in xs:
        for y in xs:
            z = complex(x, y) + (rng.random() + 1j * rng.random()) * 1e-3
            if domain.contains(z) and abs(z - zeta) > 1e-3:
                starts.append(z)
    found: list[CriticalPointRecord] = []
    for z0 in starts:
        res = _newton(eval_, domain, z0, zeta)
        if res is None:
            continue
        z, residual, iters = res
        if residual > residual_tol:
            continue
        if any(abs(z - rec.z) < dedupe for rec in found):
            continue
        found.append(CriticalPointRecord(z=z, zeta=zeta, residual=residual, newton_iters=iters))
    found.sort(key=lambda rec: (rec.z.real, rec.z.imag))
    return found


def count_gradient_zeros(eval_, domain: Annulus, zeta: complex,
                         inset: float = 1e-2, n: int = 4096) -> int:
    """Number of interior zeros of dG(., zeta) by the argument principle.

    dG is meromorphic in z with one simple pole at zeta, so the boundary
    winding of dG equals (#zeros - 1); evaluated on circles inset from both
    boundary components.
    """
    total = 0.0
    for radius, orient in ((1.0 - inset, +1), (domain.r + inset, -1)):
        th = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
        vals = eval_.grad_green(radius * np.exp(1j * th), zeta)
        total += orient * np.angle(np.roll(vals, -1) / vals).sum() / (2 * np.pi)
    return int(round(total)) + 1


def polish_critical_point_mp(domain: Annulus, z: complex, zeta: complex,
                             digits: int = 40) -> complex:
    """Newton-polish an annulus critical point in extended precision.

    The rounding floor of dG in double precision is ~1e-16 while |d2G| can be
    as small as ~1e-5 on the far side of the hole, leaving ~1e-12 position
    noise on double-precision roots; a few extended-precision steps remove it.
    """
    import mpmath as mp

    from .green.annulus_series import _truncation

    with mp.workdps(digits):
        r = mp.mpf(domain.r)
        L = mp.log(r)
        M = _truncation(domain.r) + 10
        p = mp.mpc(zeta)
        pb = mp.conj(p)
        logp = mp.log(abs(p))
        r2 = r * r
        c3, c4 = r2 * p, r2 / pb
        e = [r ** (2 * n) / (n * (1 - r ** (2 * n))) for n in range(1, M + 1)]

        def h_deriv(zz, k):
            fk = mp.factorial(k - 1)
            sgn = (-1) ** (k - 1)
            out = (logp / L) * sgn * fk / zz**k
            out += -fk * pb**k / (1 - pb * zz) ** k
            out += fk * (r2 / p) ** k / (1 - r2 * zz / p) ** k
            out += -sgn * fk * (1 / (zz - c3) ** k - 1 / zz**k)
            out += sgn * fk * (1 / (zz - c4) ** k - 1 / zz**k)
            tail = mp.mpc(0)
            for i in range(M):
                n = i + 1
                fp = fn = mp.mpf(1)
                for j in range(k):
                    fp *= n - j
                    fn *= -n - j
                tail += e[i] * (
                    fp * ((r2 * zz / p) ** n - (pb * zz) ** n)
                    + fn * ((r2 * p / zz) ** n - (r2 / (pb * zz)) ** n)
                )
            return out + tail / zz**k

        w = mp.mpc(z)
        for _ in range(6):
            f = -mp.mpf("0.5") / (w - p) + h_deriv(w, 1) / 2
            df = mp.mpf("0.5") / (w - p) ** 2 + h_deriv(w, 2) / 2
            w = w - f / df
        return complex(w)


def f_ratio(eval_, z: complex, zeta: complex, a: complex) -> complex:
    """Normalized gradient dG(z, zeta)/dG(a, zeta); zeros = critical points."""
    denom = grad_green(eval_, a, zeta)
    if abs(denom) < 1e-12:
        raise BadNormalizer("normalizing point has vanishing gradient")
    return grad_green(eval_, z, zeta) / denom


@dataclass
class SequenceRow:
    k: int
    r_k: float
    zeta_k: complex
    z_k: complex
    residual: float
    k_limit_residual: float


@dataclass
class SequenceReport:
    rows: list
    z0: complex
    zeta0: complex
    sup_table: list          # per k: {order -> sup |d^order G_k(z_k, .)| on D_k \ B}
    limit_sup: dict          # same sups for the limit domain at z0
    converged: bool


def _sup_derivatives(eval_, domain: Domain, z_at: complex, ball_center: complex,
                     ball_radius: float, orders=(1, 2)) -> dict:
    pts = []
    if isinstance(domain, Annulus):
        for rho in np.linspace(domain.r + 0.02, 0.98, 12):
            for th in np.linspace(0.0, 2 * np.pi, 24, endpoint=False):
                z = rho * np.exp(1j * th)
                if abs(z - ball_center) > ball_radius:
                    pts.append(z)
    else:
        raise NotImplementedError
    out = {}
    for order in orders:
        vals = []
        for zeta in pts:
            if order == 1:
                v = eval_.grad_green(z_at, zeta)
            else:
                v = 0.5 / (z_at - zeta) ** 2 + eval_.regular_part_dz(z_at, zeta, 2)
            vals.append(abs(v))
        out[order] = float(max(vals))
    return out


def domain_sequence_experiment(radii, limit_domain: Annulus, zeta0: complex,
                               z0: complex | None = None, ball_radius: float = 0.1,
                               contrapositive_center: complex | None = None) -> SequenceReport:
    """Tracks Green's critical points along annuli A(r_k) -> A(r).

    Poles approach zeta0 in dD along the inward normal with dist 2^-(k+2).
    When z0 (a zero of K_limit(., zeta0)) is given or found, the tracked
    critical points z_k are reported against it; for a window around
    contrapositive_center where |K| is bounded away from 0, the report
    certifies that no critical point enters the window.
    """
    zeta0 = complex(zeta0)
    if z0 is None:
        z0 = bergman_kernel_zero(limit_domain, zeta0)
    limit_eval = make_evaluator(limit_domain)
    inward = limit_domain.inward_normal(zeta0)
    rows = []
    sup_table = []
    z_prev = z0
    for k, r_k in enumerate(radii):
        dom_k = Annulus(float(r_k))
        ev = make_evaluator(dom_k)
        zeta_k = zeta0 + (2.0 ** (-(k + 2))) * inward
        res = _newton(ev, dom_k, z_prev, zeta_k)
        if res is None:
            raise TrackingLost(f"Newton diverged at step k={k}")
        z_k, residual, _ = res
        k_limit = abs(bergman_kernel(limit_domain, z_k, zeta0).value)
        rows.append(SequenceRow(k=k, r_k=float(r_k), zeta_k=zeta_k, z_k=z_k,
                                residual=residual, k_limit_residual=k_limit))
        sup_table.append(_sup_derivatives(ev, dom_k, z_k, zeta_k, ball_radius))
        z_prev = z_k
    limit_sup = _sup_derivatives(limit_eval, limit_domain, z0, zeta0, ball_radius)
    converged = abs(rows[-1].z_k - z0) < 1e-3 if rows else False
    return SequenceReport(rows=rows, z0=z0, zeta0=zeta0, sup_table=sup_table,
                          limit_sup=limit_sup, converged=converged)
