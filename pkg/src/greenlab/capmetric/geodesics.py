"""Geodesic flow of the capacity metric.

The conformal metric with density c = e^{-Lambda} has geodesic equation

    z''(t) = 2 dLambda(z(t)) (z'(t))^2

for the standard Levi-Civita connection; the flag `paper_ode` switches to the
variant without the factor 2 for side-by-side comparison (the unit-disc
geodesic tanh(t) satisfies the factor-2 form exactly and fails the other).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.stats import linregress

from ..errors import LeftDomain, NotEscaping, NoQualifyingTime, StepUnderflow
from ..geometry import Domain
from ..robin import capacity_density
from .metric import grad_robin


@dataclass(frozen=True)
class GeodesicState:
    z: complex
    v: complex


@dataclass
class GeodesicPath:
    t: np.ndarray
    z: np.ndarray
    v: np.ndarray
    psi: np.ndarray
    speed: np.ndarray             # capacity speed c(z)|v| per sample
    kappa: np.ndarray             # Euclidean curvature per sample
    status: str                   # "completed" | "hit_stop_band"
    exit_time: float | None
    domain: Domain
    dense: object = field(repr=False, default=None)

    @property
    def speed_drift(self) -> float:
        return float(np.abs(self.speed - self.speed[0]).max())

    def state(self, t: float) -> GeodesicState:
        y = self.dense(t)
        return GeodesicState(z=complex(y[0], y[1]), v=complex(y[2], y[3]))

    def sample(self, times) -> np.ndarray:
        ys = self.dense(np.asarray(times, dtype=float))
        return ys[0] + 1j * ys[1]

    def ode_residual(self) -> float:
        """Max |second difference - rhs| over interior samples (scaled)."""
        t, z = self.t, self.z
        if t.size < 3:
            return 0.0
        res = 0.0
        for i in range(1, t.size - 1, max(1, t.size // 200)):
            h1, h2 = t[i] - t[i - 1], t[i + 1] - t[i]
            if h1 <= 0 or h2 <= 0:
                continue
            acc = 2 * (h1 * z[i + 1] - (h1 + h2) * z[i] + h2 * z[i - 1]) / (h1 * h2 * (h1 + h2))
            res = max(res, abs(acc - self._rhs_acc[i]) / max(1.0, abs(self._rhs_acc[i])))
        return res


def unit_capacity_velocity(eval_, z: complex, direction: complex) -> complex:
    """Velocity in the given direction with capacity speed 1."""
    c = capacity_density(eval_, z)
    return direction / abs(direction) / c


def integrate_geodesic(eval_, state0: GeodesicState, T: float, tol: float = 1e-10,
                       stop_band: float | None = None, paper_ode: bool = False,
                       max_step: float | None = None, dense: bool = True) -> GeodesicPath:
    """Adaptive embedded Runge-Kutta 5(4) trajectory of the geodesic flow.

    Stops early (status "hit_stop_band") when dist(z, boundary) falls below
    stop_band, default 1e-6 times the domain scale.  Capacity speed is not
    renormalized; its drift is a quality diagnostic, not an enforcement.
    """
    domain = eval_.domain
    z0 = domain.require_inside(state0.z)
    factor = 1.0 if paper_ode else 2.0
    if stop_band is None:
        stop_band = 1e-6 * domain.scale
    if max_step is None:
        max_step = 0.01 * domain.scale

    def rhs(t, y):
        z = complex(y[0], y[1])
        v = complex(y[2], y[3])
        acc = factor * grad_robin(eval_, z) * v * v
        return [v.real, v.imag, acc.real, acc.imag]

    def too_close(t, y):
        z = complex(y[0], y[1])
        try:
            return domain.distance(z)[0] - stop_band
        except Exception:
            return -stop_band
    too_close.terminal = True
    too_close.direction = -1

    y0 = [z0.real, z0.imag, state0.v.real, state0.v.imag]
    sol = solve_ivp(rhs, (0.0, T), y0, method="RK45", rtol=tol, atol=tol,
                    max_step=max_step, events=too_close, dense_output=dense)
    if sol.status == -1:
        raise StepUnderflow(f"integrator failed: {sol.message}")
    z = sol.y[0] + 1j * sol.y[1]
    v = sol.y[2] + 1j * sol.y[3]
    psi = np.empty(z.size)
    speed = np.empty(z.size)
    kappa = np.empty(z.size)
    rhs_acc = np.empty(z.size, dtype=complex)
    for i, (zz, vv) in enumerate(zip(z, v)):
        jet = domain.psi_jet(zz)
        if jet.psi >= 0:
            raise LeftDomain("trajectory stepped outside the domain", exit_time=float(sol.t[i]))
        psi[i] = jet.psi
        dl = grad_robin(eval_, zz)
        lam = -math.log(capacity_density(eval_, zz))
        speed[i] = math.exp(-lam) * abs(vv)
        kappa[i] = np.imag(dl * vv / abs(vv)) if vv != 0 else 0.0
        rhs_acc[i] = factor * dl * vv * vv
    status = "hit_stop_band" if sol.status == 1 else "completed"
    exit_time = float(sol.t_events[0][0]) if sol.status == 1 and sol.t_events[0].size else None
    path = GeodesicPath(t=sol.t, z=z, v=v, psi=psi, speed=speed, kappa=kappa,
                        status=status, exit_time=exit_time, domain=domain,
                        dense=sol.sol if dense else None)
    path._rhs_acc = rhs_acc
    return path


def escape_analysis(path: GeodesicPath) -> dict:
    """Exponential boundary-approach fit on the escaping tail of a path.

    Returns rate (decay rate of -psi), fit quality r2, the estimated limit
    boundary point, and the geometric-decay check on |z(t_k+1) - z(t_k)|.
    Raises NotEscaping when psi does not tend to 0 along the path.
    """
    minus_psi = -path.psi
    if minus_psi.min() <= 0:
        raise NotEscaping("path touches the boundary")
    final = minus_psi[-1]
    scale = np.abs(path.psi).max()
    if path.status != "hit_stop_band" and final > 0.05 * scale:
        raise NotEscaping("psi does not approach zero along the path")
    log_mpsi = np.log(minus_psi)
    # escaping tail: the asymptotic regime -psi < 0.1 max(-psi), then the
    # maximal suffix on which log(-psi) decreases
    below = np.nonzero(minus_psi < 0.1 * minus_psi.max())[0]
    i_asym = int(below[0]) if below.size else 0
    i0 = path.t.size - 1
    while i0 > i_asym and log_mpsi[i0 - 1] >= log_mpsi[i0]:
        i0 -= 1
    tail = slice(i0, path.t.size)
    tt = path.t[tail]
    if tt.size < 8 or tt[-1] - tt[0] < 0.5:
        raise NotEscaping("escaping tail too short to fit")
    fit = linregress(tt, log_mpsi[tail])
    rate = -fit.slope
    r2 = fit.rvalue**2

    # Cauchy increments at unit time steps on the tail
    n_steps = int(tt[-1] - tt[0])
    increments = []
    if n_steps >= 3 and path.dense is not None:
        times = tt[0] + np.arange(n_steps + 1)
        zs = path.sample(times)
        increments = list(np.abs(np.diff(zs)))
    ratios = [b / a for a, b in zip(increments, increments[1:]) if a > 0]

    z_end = complex(path.z[-1])
    _, foot = path.domain.distance(z_end)
    return {
        "rate": float(rate),
        "r2": float(r2),
        "boundary_point": complex(foot),
        "tail_start": float(tt[0]),
        "increments": increments,
        "increment_ratios": ratios,
        "geometric_decay": bool(ratios) and max(ratios) < 1.0,
    }


def geodesic_angle_monitor(path: GeodesicPath, domain: Domain,
                           t0: float | None = None, horizon: float = 100.0) -> list[dict]:
    """Per-sample escape diagnostics after a qualifying time t0.

    Reports the ratio (psi o z)'/(-psi o z) (positivity is estimate (I)) and
    the normal angle arg(dpsi(z) z') whose initial-bound band is estimate (II).
    """
    dpsi_dt = np.array(
        [2.0 * np.real(domain.psi_jet(z).d_psi * v) for z, v in zip(path.z, path.v)]
    )
    near = -path.psi < 0.25 * np.abs(path.psi).max()
    if t0 is None:
        qual = np.nonzero((dpsi_dt > 0) & near)[0]
        if qual.size == 0:
            raise NoQualifyingTime("no sample with (psi o z)' > 0 near the boundary")
        t0 = float(path.t[qual[0]])
    rows = []
    for i in range(path.t.size):
        if not (t0 <= path.t[i] <= t0 + horizon):
            continue
        jet = domain.psi_jet(path.z[i])
        angle = float(np.angle(jet.d_psi * path.v[i]))
        rows.append(
            {
                "t": float(path.t[i]),
                "angle": angle,
                "ratio": float(dpsi_dt[i] / (-path.psi[i])),
                "estimate_I_ok": bool(dpsi_dt[i] > 0),
            }
        )
    return rows
