"""Closed geodesics, loop shortening, and the spiral search."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize

from ..errors import AllEscaped, NoConvergence, TrivialClass
from ..geometry import Annulus, Domain, UnitDisc
from ..robin import capacity_density
from .geodesics import GeodesicPath, GeodesicState, integrate_geodesic, unit_capacity_velocity
from .metric import grad_robin


@dataclass
class ClosedGeodesic:
    path: GeodesicPath
    length: float
    radius: float | None       # circle radius when the loop is a circle
    closure_error: float
    winding: int
    stationarity: float | None = None


def circle_criterion(eval_, rho: float) -> float:
    """Re(2 z dLambda(z)) - 1 on |z| = rho; zero exactly on a circular geodesic."""
    return float(np.real(2.0 * rho * grad_robin(eval_, complex(rho)))) - 1.0


def find_closed_geodesic(eval_, domain: Domain, winding: int,
                         tol: float = 1e-12, ode_tol: float = 1e-12) -> ClosedGeodesic:
    """Closed geodesic in the given winding class.

    Annulus: one-dimensional root find on the circle criterion followed by an
    ODE confirmation over |winding| revolutions.  Other multiply connected
    domains go through discrete loop shortening.
    """
    if winding == 0 or isinstance(domain, UnitDisc):
        raise TrivialClass("simply connected class carries no closed geodesic")
    if isinstance(domain, Annulus):
        lo, hi = domain.r + 1e-6, 1.0 - 1e-6
        if circle_criterion(eval_, lo) * circle_criterion(eval_, hi) > 0:
            raise NoConvergence("circle criterion does not change sign")
        rho = brentq(lambda s: circle_criterion(eval_, s), lo, hi, xtol=tol)
        c = capacity_density(eval_, complex(rho))
        period = 2.0 * math.pi * rho * c
        sgn = 1 if winding > 0 else -1
        v0 = sgn * 1j * rho / (rho * c)  # tangential, unit capacity speed
        path = integrate_geodesic(eval_, GeodesicState(complex(rho), v0),
                                  abs(winding) * period, tol=ode_tol)
        closure = abs(path.z[-1] - path.z[0]) + abs(path.v[-1] - path.v[0])
        return ClosedGeodesic(path=path, length=abs(winding) * period, radius=float(rho),
                              closure_error=float(closure), winding=winding)
    return loop_shorten(eval_, domain, winding)


def loop_shorten(eval_, domain: Domain, winding: int, n_vertices: int = 128,
                 gtol: float = 1e-8, ode_tol: float = 1e-12) -> ClosedGeodesic:
    """Discrete length minimization over a polygon of fixed winding class."""
    centers = domain.hole_centers()
    if not centers:
        raise TrivialClass("domain has no holes")
    c0 = centers[0]
    if isinstance(domain, Annulus):
        rho0 = math.sqrt(domain.r)  # any interior circle works as a seed
        rho0 = 0.5 * (domain.r + 1.0) / 2 + rho0 / 2
    else:
        rho0 = 0.5 * min(abs(domain.distance(c0)[0]) if domain.contains(c0) else 1.0, 1.0)
        rho0 = max(rho0, 0.1 * domain.scale)
    k = np.arange(n_vertices)
    seed = c0 + 0.6 * np.exp(2j * math.pi * winding * k / n_vertices) if not isinstance(
        domain, Annulus
    ) else c0 + rho0 * np.exp(2j * math.pi * winding * k / n_vertices)

    def unpack(x):
        return x[0::2] + 1j * x[1::2]

    def length_and_grad(x):
        z = unpack(x)
        nxt = np.roll(z, -1)
        mid = 0.5 * (z + nxt)
        seg = nxt - z
        ln = np.abs(seg)
        c = np.array([capacity_density(eval_, m) for m in mid])
        dl = np.array([grad_robin(eval_, m) for m in mid])
        total = float(np.sum(c * ln))
        # per-vertex gradient of c(m)|seg|: the midpoint chain-rule 1/2 cancels
        # against the Wirtinger-to-gradient factor 2, leaving conj(dc) = -c conj(dl)
        dc_conj = np.conj(-c * dl)
        unit = seg / ln
        g = ln * dc_conj - c * unit
        g_next = ln * dc_conj + c * unit
        grad = g + np.roll(g_next, 1)
        out = np.empty(x.size)
        out[0::2] = grad.real
        out[1::2] = grad.imag
        return total, out

    x0 = np.empty(2 * n_vertices)
    x0[0::2] = seed.real
    x0[1::2] = seed.imag
    x = x0
    stationarity = math.inf
    for _ in range(4):  # restarts clear the L-BFGS memory past stalls
        res = minimize(length_and_grad, x, jac=True, method="L-BFGS-B",
                       options={"gtol": 1e-12, "maxiter": 8000, "ftol": 1e-18})
        x = res.x
        stationarity = float(np.abs(length_and_grad(x)[1]).max())
        if stationarity < gtol:
            break
    z = unpack(x)
    if stationarity > gtol:
        raise NoConvergence(f"loop shortening stalled at gradient {stationarity:.2e}")
    # ODE confirmation from the first vertex along the polygon
    z0 = complex(z[0])
    direction = complex(z[1] - z[-1])
    v0 = unit_capacity_velocity(eval_, z0, direction)
    length = length_and_grad(x)[0]
    path = integrate_geodesic(eval_, GeodesicState(z0, v0), length, tol=ode_tol)
    closure = abs(path.z[-1] - path.z[0]) + abs(path.v[-1] - path.v[0])
    radius = float(np.mean(np.abs(z - c0))) if isinstance(domain, Annulus) else None
    return ClosedGeodesic(path=path, length=float(length), radius=radius,
                          closure_error=float(closure), winding=winding,
                          stationarity=stationarity)


# -- spiral search ---------------------------------------------------------------


def calibrate_band(eval_, domain: Domain, eps0: float | None = None,
                   n_samples: int = 64) -> float:
    """Largest eps (halving from 0.05 * scale) such that every sampled
    near-boundary tangential state has (psi o gamma)'' > 0."""
    eps = 0.05 * domain.scale if eps0 is None else eps0
    for _ in range(40):
        if _band_is_convex(eval_, domain, eps, n_samples):
            return eps
        eps *= 0.5
    raise NoConvergence("band calibration failed to find a convex collar")


def _band_is_convex(eval_, domain: Domain, eps: float, n_samples: int) -> bool:
    states = _tangential_band_states(domain, eps, n_samples)
    for z, v in states:
        jet = domain.psi_jet(z)
        acc = 2.0 * grad_robin(eval_, z) * v * v
        second = (
            2.0 * np.real(jet.d_psi * acc)
            + 2.0 * np.real(jet.d2_psi * v * v)
            + 2.0 * jet.ddbar_psi * abs(v) ** 2
        )
        if second <= 0:
            return False
    return True


def _tangential_band_states(domain: Domain, eps: float, n_samples: int):
    states = []
    curves = domain.boundary_curves()
    per = max(2, n_samples // (2 * len(curves)))
    thetas = np.linspace(0.0, 2 * np.pi, per, endpoint=False)
    for curve in curves:
        for theta in thetas:
            base = complex(curve.point(theta))
            nu = complex(curve.normal(theta))
            for frac in (0.25, 0.75):
                z = base - nu * _offset_for_psi(domain, base, nu, frac * eps)
                if not domain.contains(z):
                    continue
                jet = domain.psi_jet(z)
                v = 1j * np.conj(jet.d_psi)
                v /= abs(v)
                states.append((z, v))
    return states


def _offset_for_psi(domain: Domain, base: complex, nu: complex, target: float) -> float:
    # first-order step; bisect a little to land near psi = -target
    lo, hi = 0.0, 0.5 * domain.scale
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        z = base - nu * mid
        try:
            psi = domain.psi_jet(z).psi
        except Exception:
            hi = mid
            continue
        if psi > -target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class SpiralReport:
    path: GeodesicPath
    stay_time: float
    horizon: float
    eps1: float
    launch_angle: float
    nonclosure_margin: float
    radial_ranges: list
    in_band_for_horizon: bool


def nonclosure_margin(path: GeodesicPath, period_floor: float = 0.5,
                      dt: float = 0.1, t_max: float | None = None) -> float:
    """min over sample pairs |t - s| > period_floor of |z(t)-z(s)| + |v(t)-v(s)|."""
    t_end = path.t[-1] if t_max is None else min(t_max, path.t[-1])
    times = np.arange(0.0, t_end, dt)
    ys = path.dense(times)
    z = ys[0] + 1j * ys[1]
    v = ys[2] + 1j * ys[3]
    n = times.size
    best = math.inf
    gap = int(math.ceil(period_floor / dt))
    for k in range(gap, n):
        d = np.abs(z[k:] - z[:-k]) + np.abs(v[k:] - v[:-k])
        best = min(best, float(d.min()))
    return best


def spiral_search(eval_, domain: Domain, z0: complex, horizon: float = 200.0,
                  n_angles: int = 512, scan_tol: float = 1e-8, final_tol: float = 1e-11,
                  refine_iters: int = 60, raise_on_escape: bool = True,
                  jobs: int = 1) -> SpiralReport:
    """Scan launch directions for a forward-compact, non-closed geodesic.

    Directions on an n_angles grid are integrated until they leave
    K = {psi <= -eps1}; the best bracket is refined by bisection on the
    launch angle.  In exact arithmetic the spiral is a separatrix of the
    direction family, so the achievable stay time in floating point is
    limited by the integrator noise amplified at the instability rate of the
    closed geodesic; AllEscaped reports the best stay time when no direction
    survives the full horizon.
    """
    z0 = domain.require_inside(complex(z0))
    try:
        closed = find_closed_geodesic(eval_, domain, winding=1)
    except TrivialClass:
        closed = None  # simply connected: every direction will escape
    if (closed is not None and closed.radius is not None
            and abs(abs(z0) - closed.radius) < 1e-6):
        raise ValueError("z0 lies on the closed geodesic")
    eps = calibrate_band(eval_, domain)
    eps1 = min(eps, -domain.psi_jet(z0).psi)
    speed = 1.0 / capacity_density(eval_, z0)

    def leaves_band(t, y):
        z = complex(y[0], y[1])
        try:
            return -domain.psi_jet(z).psi - eps1 * (1.0 - 1e-12)
        except Exception:
            return -1.0
    leaves_band.terminal = True
    leaves_band.direction = -1

    def run(angle: float, tol: float, dense: bool = False) -> GeodesicPath:
        v0 = speed * np.exp(1j * angle)
        return _integrate_with_event(eval_, domain, GeodesicState(z0, v0), horizon,
                                     tol, leaves_band, dense)

    def stay_time(path: GeodesicPath) -> float:
        return float(path.t[-1])

    def escape_side(path: GeodesicPath) -> int:
        # +1 toward the outer boundary, -1 toward the hole, 0 survived
        if stay_time(path) >= horizon - 1e-9:
            return 0
        if closed is not None and closed.radius is not None:
            return 1 if abs(path.z[-1]) > closed.radius else -1
        return 1

    angles = np.linspace(0.0, 2 * math.pi, n_angles, endpoint=False)
    stays = np.empty(n_angles)
    sides = np.empty(n_angles, dtype=int)

    def scan_one(i: int):
        path = run(angles[i], scan_tol)
        return stay_time(path), escape_side(path)

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(scan_one, range(n_angles)))
    else:
        outcomes = [scan_one(i) for i in range(n_angles)]
    for i, (stay, side) in enumerate(outcomes):
        stays[i] = stay
        sides[i] = side
    best = int(np.argmax(stays))
    best_angle, best_stay = float(angles[best]), float(stays[best])
    # bisection refinement between adjacent angles escaping to opposite sides
    lo = hi = None
    order = np.argsort(stays)[::-1]
    for i in order[:8]:
        j = (i + 1) % n_angles
        if sides[i] != sides[j] and sides[i] != 0 and sides[j] != 0:
            lo, hi = angles[i], angles[i] + 2 * math.pi / n_angles
            lo_side = sides[i]
            break
    if lo is not None:
        for _ in range(refine_iters):
            mid = 0.5 * (lo + hi)
            path = run(mid, scan_tol)
            s = stay_time(path)
            if s > best_stay:
                best_stay, best_angle = s, mid
            side = escape_side(path)
            if side == 0:
                best_angle = mid
                break
            if side == lo_side:
                lo = mid
            else:
                hi = mid
    final = run(best_angle, final_tol, dense=True)
    stay = stay_time(final)
    margin = nonclosure_margin(final, t_max=stay)
    ranges = _radial_ranges(final, 5)
    report = SpiralReport(
        path=final,
        stay_time=stay,
        horizon=horizon,
        eps1=float(eps1),
        launch_angle=float(best_angle),
        nonclosure_margin=float(margin),
        radial_ranges=ranges,
        in_band_for_horizon=bool(stay >= horizon - 1e-9),
    )
    if raise_on_escape and not report.in_band_for_horizon:
        err = AllEscaped(
            f"no direction stayed in the band for {horizon}; best stay {stay:.2f}",
            best_stay_time=stay,
        )
        err.report = report
        raise err
    return report


def _radial_ranges(path: GeodesicPath, n_windows: int) -> list:
    edges = np.linspace(0.0, path.t[-1], n_windows + 1)
    out = []
    rad = np.abs(path.z)
    for a, b in zip(edges, edges[1:]):
        sel = (path.t >= a) & (path.t <= b)
        if sel.any():
            out.append((float(rad[sel].min()), float(rad[sel].max())))
    return out


def _integrate_with_event(eval_, domain, state0, T, tol, event, dense):
    from scipy.integrate import solve_ivp

    from ..errors import StepUnderflow

    factor = 2.0

    def rhs(t, y):
        z = complex(y[0], y[1])
        v = complex(y[2], y[3])
        acc = factor * grad_robin(eval_, z) * v * v
        return [v.real, v.imag, acc.real, acc.imag]

    y0 = [state0.z.real, state0.z.imag, state0.v.real, state0.v.imag]
    sol = solve_ivp(rhs, (0.0, T), y0, method="RK45", rtol=tol, atol=tol,
                    max_step=0.01 * domain.scale, events=event, dense_output=dense)
    if sol.status == -1:
        raise StepUnderflow(f"integrator failed: {sol.message}")
    z = sol.y[0] + 1j * sol.y[1]
    v = sol.y[2] + 1j * sol.y[3]
    psi = np.array([domain.psi_jet(zz).psi for zz in z])
    path = GeodesicPath(t=sol.t, z=z, v=v, psi=psi,
                        speed=np.ones_like(psi), kappa=np.zeros_like(psi),
                        status="completed" if sol.status == 0 else "hit_stop_band",
                        exit_time=None, domain=domain,
                        dense=sol.sol if dense else None)
    path._rhs_acc = np.zeros_like(z)
    return path
