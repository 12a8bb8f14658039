"""Named experiments behind the service and the CLI.

Every experiment is a pure function of (domain, params, seed, tolerances)
returning rows/summaries plus rendered artifacts, so two runs with the same
request produce byte-identical CSV/JSON.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import asymptotics as asy
from . import robin as robin_ops
from .acceptance import BLOCKED, run_criteria
from .artifacts import csv_artifact, json_artifact, plot_residuals, plot_trajectory
from .bergman import bergman_green_identity_residual, bergman_kernel, gram_schmidt_kernel
from .capmetric import (
    GeodesicState,
    escape_analysis,
    find_closed_geodesic,
    integrate_geodesic,
    spiral_search,
    unit_capacity_velocity,
)
from .critical import domain_sequence_experiment, find_critical_points
from .errors import AllEscaped, ConfigError, NotEscaping
from .geometry import Annulus, Domain
from .green import green_convergence_report, make_evaluator

COMMANDS = (
    "robin", "geodesic", "closed-geodesic", "spiral", "asymptotics",
    "critical", "bergman", "convergence", "acceptance",
)

_PATH_FIELDS = ["t", "re z", "im z", "re v", "im v", "psi", "speed", "kappa"]


@dataclass
class ExperimentResult:
    command: str
    status: str               # "ok" | "tolerance_failure"
    summary: dict
    artifacts: list = field(default_factory=list)


def _parse_complex(value, name: str) -> complex:
    try:
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, str):
            return complex(value.replace(" ", "").replace("i", "j"))
        return complex(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"parameter {name!r} is not a complex number: {value!r}") from exc


def _require(params: dict, name: str):
    if name not in params:
        raise ConfigError(f"missing required parameter {name!r}")
    return params[name]


def _check_params(params: dict, allowed: set[str]) -> None:
    unknown = set(params) - allowed
    if unknown:
        raise ConfigError(f"unknown parameter(s): {sorted(unknown)}")


def _path_rows(path) -> list[dict]:
    rows = []
    for i in range(path.t.size):
        rows.append({
            "t": path.t[i], "re z": path.z[i].real, "im z": path.z[i].imag,
            "re v": path.v[i].real, "im v": path.v[i].imag,
            "psi": path.psi[i], "speed": path.speed[i], "kappa": path.kappa[i],
        })
    return rows


def run_experiment(command: str, domain: Domain | None, params: dict,
                   seed: int = 42, tolerances: dict | None = None,
                   paper_ode: bool = False, jobs: int = 1) -> ExperimentResult:
    tolerances = dict(tolerances or {})
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    handler = _HANDLERS[command]
    return handler(domain, dict(params or {}), seed, tolerances, paper_ode, jobs)


def _need_domain(domain: Domain | None) -> Domain:
    if domain is None:
        raise ConfigError("this command requires a --domain file")
    return domain


def _run_robin(domain, params, seed, tolerances, paper_ode, jobs):
    domain = _need_domain(domain)
    _check_params(params, {"p", "order", "n_max"})
    p = _parse_complex(_require(params, "p"), "p")
    order = int(params.get("order", 2))
    n_max = int(params.get("n_max", 4))
    ev = make_evaluator(domain)
    report = robin_ops.build_report(ev, domain, p, order=order, n_max=n_max)
    fields = ["re p", "im p", "Lambda", "capacity", "lambda_norm"]
    row = {"re p": report.p.real, "im p": report.p.imag, "Lambda": report.robin,
           "capacity": report.capacity, "lambda_norm": report.lambda_norm}
    for n in range(1, n_max + 1):
        fields += [f"re c{n}", f"im c{n}"]
        row[f"re c{n}"] = report.coefficients[n].real
        row[f"im c{n}"] = report.coefficients[n].imag
    artifacts = [json_artifact("robin_report.json", report.to_dict()),
                 csv_artifact("robin_report.csv", fields, [row])]
    return ExperimentResult("robin", "ok",
                            {"Lambda": report.robin, "capacity": report.capacity,
                             "lambda_norm": report.lambda_norm}, artifacts)


def _initial_state(ev, domain, params) -> GeodesicState:
    z0 = _parse_complex(_require(params, "z0"), "z0")
    if "v0" in params:
        return GeodesicState(z0, _parse_complex(params["v0"], "v0"))
    angle = float(params.get("angle", 0.0))
    return GeodesicState(z0, unit_capacity_velocity(ev, z0, np.exp(1j * angle)))


def _run_geodesic(domain, params, seed, tolerances, paper_ode, jobs):
    domain = _need_domain(domain)
    _check_params(params, {"z0", "v0", "angle", "T"})
    ev = make_evaluator(domain)
    state = _initial_state(ev, domain, params)
    T = float(params.get("T", 5.0))
    tol = float(tolerances.get("ode", 1e-10))
    path = integrate_geodesic(ev, state, T, tol=tol, paper_ode=paper_ode)
    summary = {"status": path.status, "samples": int(path.t.size),
               "speed_drift": path.speed_drift, "t_end": float(path.t[-1])}
    try:
        ea = escape_analysis(path)
        summary["escape"] = {"rate": ea["rate"], "r2": ea["r2"],
                             "boundary_point": [ea["boundary_point"].real,
                                                ea["boundary_point"].imag]}
    except NotEscaping:
        summary["escape"] = None
    artifacts = [csv_artifact("geodesic_path.csv", _PATH_FIELDS, _path_rows(path)),
                 plot_trajectory("geodesic.svg", domain, [path.z])]
    drift_tol = tolerances.get("speed_drift")
    status = "ok"
    if drift_tol is not None and path.speed_drift > drift_tol:
        status = "tolerance_failure"
        summary["first_failure"] = f"speed_drift {path.speed_drift:.3e} > {drift_tol:.3e}"
    return ExperimentResult("geodesic", status, summary, artifacts)


def _run_closed_geodesic(domain, params, seed, tolerances, paper_ode, jobs):
    domain = _need_domain(domain)
    _check_params(params, {"winding"})
    winding = int(params.get("winding", 1))
    ev = make_evaluator(domain)
    cg = find_closed_geodesic(ev, domain, winding, ode_tol=float(tolerances.get("ode", 2e-13)))
    summary = {"length": cg.length, "radius": cg.radius,
               "closure_error": cg.closure_error, "winding": cg.winding}
    artifacts = [csv_artifact("closed_geodesic.csv", _PATH_FIELDS, _path_rows(cg.path)),
                 plot_trajectory("closed_geodesic.svg", domain, [cg.path.z])]
    closure_tol = tolerances.get("closure", 1e-6)
    status = "ok" if cg.closure_error < closure_tol else "tolerance_failure"
    if status != "ok":
        summary["first_failure"] = f"closure {cg.closure_error:.3e} > {closure_tol:.3e}"
    return ExperimentResult("closed-geodesic", status, summary, artifacts)


def _run_spiral(domain, params, seed, tolerances, paper_ode, jobs):
    domain = _need_domain(domain)
    _check_params(params, {"z0", "T", "angles"})
    z0 = _parse_complex(_require(params, "z0"), "z0")
    horizon = float(params.get("T", 200.0))
    n_angles = int(params.get("angles", 512))
    ev = make_evaluator(domain)
    try:
        rep = spiral_search(ev, domain, z0, horizon=horizon, n_angles=n_angles,
                            jobs=max(1, int(jobs)))
        status = "ok"
    except AllEscaped as exc:
        rep = exc.report
        status = "tolerance_failure"
    summary = {"stay_time": rep.stay_time, "horizon": rep.horizon, "eps1": rep.eps1,
               "nonclosure_margin": rep.nonclosure_margin,
               "launch_angle": rep.launch_angle,
               "in_band_for_horizon": rep.in_band_for_horizon,
               "radial_ranges": rep.radial_ranges}
    if status != "ok":
        summary["first_failure"] = (
            f"stay_time {rep.stay_time:.2f} < horizon {rep.horizon:.0f}"
        )
    artifacts = [csv_artifact("spiral_path.csv", _PATH_FIELDS, _path_rows(rep.path)),
                 plot_trajectory("spiral.svg", domain, [rep.path.z])]
    return ExperimentResult("spiral", status, summary, artifacts)


_ASY_FIELDS = ["j", "re p", "im p", "re measured", "im measured",
               "re predicted", "im predicted", "residual"]


def _run_asymptotics(domain, params, seed, tolerances, paper_ode, jobs):
    domain = _need_domain(domain)
    _check_params(params, {"p0", "which", "alpha", "beta", "n", "J", "delta0", "tangential"})
    p0 = _parse_complex(_require(params, "p0"), "p0")
    which = params.get("which", "robin")
    alpha = int(params.get("alpha", 0))
    beta = int(params.get("beta", 0))
    n = int(params.get("n", 1))
    J = int(params.get("J", 12))
    delta0 = params.get("delta0")
    seq = asy.approach_sequence(domain, p0, J=J,
                                delta0=None if delta0 is None else float(delta0),
                                tangential=bool(params.get("tangential", False)))
    ev = make_evaluator(domain)
    if which == "robin":
        rows = asy.verify_robin_limit(ev, domain, seq)
    elif which == "robin-derivative":
        rows = asy.verify_robin_derivative_limits(ev, domain, seq, alpha, beta)
    elif which == "capacity":
        rows = asy.verify_capacity_limit(ev, domain, seq)
    elif which == "cn":
        rows = asy.verify_cn_limits(ev, domain, seq, n, alpha, beta)
    elif which == "curvature":
        rows = asy.verify_curvature_limit(ev, domain, seq)
    elif which == "rescaled":
        rows = asy.verify_rescaled_convergence(domain, p0, seq, alpha, beta)
    else:
        raise ConfigError(f"unknown asymptotics variant {which!r}")
    ratios = asy.residual_ratios(rows)
    summary = {"which": which, "final_residual": rows[-1].residual,
               "ratios": ratios[-4:]}
    status = "ok"
    tol = tolerances.get("final_residual")
    if tol is not None and rows[-1].residual > tol:
        status = "tolerance_failure"
        summary["first_failure"] = (
            f"j={rows[-1].j} residual {rows[-1].residual:.3e} > {tol:.3e}"
        )
    artifacts = [
        csv_artifact(f"asymptotics_{which}.csv", _ASY_FIELDS,
                     [r.to_dict() for r in rows]),
        plot_residuals(f"asymptotics_{which}.svg", rows),
    ]
    return ExperimentResult("asymptotics", status, summary, artifacts)


def _run_critical(domain, params, seed, tolerances, paper_ode, jobs):
    _check_params(params, {"zeta", "experiment", "steps", "zeta0"})
    if params.get("experiment") == "sequence":
        steps = int(params.get("steps", 12))
        zeta0 = _parse_complex(params.get("zeta0", 1.0), "zeta0")
        limit = domain if isinstance(domain, Annulus) else Annulus(0.5)
        radii = [limit.r * (1 + 2.0 ** -(k + 4)) for k in range(steps + 1)]
        rep = domain_sequence_experiment(radii, limit, zeta0)
        rows = [{"k": row.k, "r_k": row.r_k,
                 "re zeta_k": row.zeta_k.real, "im zeta_k": row.zeta_k.imag,
                 "re z_k": row.z_k.real, "im z_k": row.z_k.imag,
                 "residual": row.residual, "K_limit_residual": row.k_limit_residual}
                for row in rep.rows]
        payload = [{"k": r["k"], "r_k": r["r_k"], "zeta_k": [r["re zeta_k"], r["im zeta_k"]],
                    "z_k": [r["re z_k"], r["im z_k"]], "residual": r["residual"],
                    "K_limit_residual": r["K_limit_residual"]} for r in rows]
        artifacts = [
            json_artifact("sequence_report.json", payload),
            csv_artifact("sequence_report.csv",
                         ["k", "r_k", "re zeta_k", "im zeta_k", "re z_k", "im z_k",
                          "residual", "K_limit_residual"], rows),
        ]
        summary = {"z0": [rep.z0.real, rep.z0.imag], "converged": rep.converged,
                   "final_gap": abs(rep.rows[-1].z_k - rep.z0)}
        return ExperimentResult("critical", "ok", summary, artifacts)
    domain = _need_domain(domain)
    zeta = _parse_complex(_require(params, "zeta"), "zeta")
    ev = make_evaluator(domain)
    records = find_critical_points(ev, domain, zeta, seed=seed)
    rows = [{"re z": r.z.real, "im z": r.z.imag, "residual": r.residual,
             "newton_iters": r.newton_iters} for r in records]
    artifacts = [
        json_artifact("critical_points.json",
                      [{"z": [r.z.real, r.z.imag], "zeta": [r.zeta.real, r.zeta.imag],
                        "residual": r.residual, "newton_iters": r.newton_iters}
                       for r in records]),
        csv_artifact("critical_points.csv",
                     ["re z", "im z", "residual", "newton_iters"], rows),
    ]
    return ExperimentResult("critical", "ok", {"count": len(records)}, artifacts)


def _run_bergman(domain, params, seed, tolerances, paper_ode, jobs):
    domain = _need_domain(domain)
    _check_params(params, {"z", "w", "oracle"})
    z = _parse_complex(_require(params, "z"), "z")
    w = _parse_complex(_require(params, "w"), "w")
    value = bergman_kernel(domain, z, w)
    payload = {"z": [z.real, z.imag], "w": [w.real, w.imag],
               "K": [value.value.real, value.value.imag], "backend": value.backend,
               "identity_residual": (bergman_green_identity_residual(domain, z, w)
                                     if z != w else None)}
    if params.get("oracle") and isinstance(domain, Annulus):
        oracle = gram_schmidt_kernel(domain, z, w, n_range=48)
        payload["gram_schmidt_gap"] = abs(oracle - value.value)
    artifacts = [json_artifact("bergman.json", payload)]
    return ExperimentResult("bergman", "ok",
                            {"K": payload["K"],
                             "identity_residual": payload["identity_residual"]},
                            artifacts)


def _run_convergence(domain, params, seed, tolerances, paper_ode, jobs):
    domain = _need_domain(domain)
    _check_params(params, {"p", "steps"})
    if not isinstance(domain, Annulus):
        raise ConfigError("convergence experiment expects an annulus domain")
    p = _parse_complex(params.get("p", 0.75), "p")
    steps = int(params.get("steps", 8))
    limit_ev = make_evaluator(domain)
    evals = [make_evaluator(Annulus(domain.r + 2.0 ** -(j + 3))) for j in range(steps)]
    theta = np.linspace(0.0, 2 * np.pi, 24, endpoint=False)
    grid = np.concatenate([rho * np.exp(1j * theta)
                           for rho in np.linspace(domain.r + 0.35, 0.9, 5)])
    grid = grid[np.abs(grid - p) > 0.1]
    sups = green_convergence_report(evals, limit_ev, p, grid)
    rows = [{"j": j, "r_j": domain.r + 2.0 ** -(j + 3), "sup_error": s}
            for j, s in enumerate(sups)]
    ratios = [b / a for a, b in zip(sups, sups[1:])]
    artifacts = [csv_artifact("convergence.csv", ["j", "r_j", "sup_error"], rows)]
    return ExperimentResult("convergence", "ok",
                            {"sup_errors": sups, "ratios": ratios}, artifacts)


def _run_acceptance(domain, params, seed, tolerances, paper_ode, jobs):
    _check_params(params, {"criteria"})
    numbers = params.get("criteria")
    if isinstance(numbers, str):
        numbers = [int(s) for s in numbers.split(",") if s]
    results = run_criteria(numbers, seed=seed)
    payload = [{"number": r.number, "title": r.title, "passed": r.passed,
                "details": {k: repr(v) for k, v in r.details.items()},
                "notes": r.notes, "seconds": round(r.seconds, 3)} for r in results]
    failed = [r.number for r in results if not r.passed]
    summary = {
        "passed": len(results) - len(failed),
        "failed": failed,
        "known_blocked": sorted(set(failed) & set(BLOCKED)),
        "lines": [r.line() for r in results],
    }
    status = "ok" if not failed else "tolerance_failure"
    if failed:
        first = next(r for r in results if not r.passed)
        summary["first_failure"] = first.line()
    return ExperimentResult("acceptance", status, summary,
                            [json_artifact("acceptance.json", payload)])


_HANDLERS = {
    "robin": _run_robin,
    "geodesic": _run_geodesic,
    "closed-geodesic": _run_closed_geodesic,
    "spiral": _run_spiral,
    "asymptotics": _run_asymptotics,
    "critical": _run_critical,
    "bergman": _run_bergman,
    "convergence": _run_convergence,
    "acceptance": _run_acceptance,
}
