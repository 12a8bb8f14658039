import math

import numpy as np
import pytest

from greenlab.capmetric import (
    GeodesicState,
    calibrate_band,
    circle_criterion,
    comparability_report,
    curvature,
    escape_analysis,
    euclid_curvature,
    find_closed_geodesic,
    geodesic_angle_monitor,
    hyperbolic_density,
    integrate_geodesic,
    loop_shorten,
    nonclosure_margin,
    spiral_search,
    unit_capacity_velocity,
)
from greenlab.errors import AllEscaped, NoQualifyingTime, NotEscaping, NotUnitTangent, TrivialClass
from greenlab.geometry import Annulus, UnitDisc
from greenlab.green import make_evaluator
from greenlab.robin import capacity_density


def test_curvature_disc_exact(disc_eval):
    for p in (0.0, 0.5, 0.3 + 0.6j):
        assert curvature(disc_eval, p) == pytest.approx(-4.0, abs=1e-12)


def test_curvature_halfplane_exact(halfplane_eval):
    for p in (-1.0, -0.5 + 2j):
        assert curvature(halfplane_eval, p) == pytest.approx(-4.0, abs=1e-12)


def test_curvature_annulus_near_boundary(annulus_eval):
    k = curvature(annulus_eval, 1 - 1e-3)
    assert -4.05 < k < -3.95


def test_curvature_upper_bound(annulus_eval, disc_eval):
    for rho in np.linspace(0.52, 0.98, 10):
        for th in (0.0, 1.0, 2.5):
            assert curvature(annulus_eval, rho * np.exp(1j * th)) <= -4.0 + 1e-6
    for rho in np.linspace(0.0, 0.9, 7):
        assert curvature(disc_eval, rho) <= -4.0 + 1e-6


def test_euclid_curvature_examples(disc_eval, disc):
    kappa = euclid_curvature(disc_eval, 0.9, 1j)
    assert kappa == pytest.approx(-0.9 / 0.19, abs=1e-12)
    # band value from Cor 1.6: kappa (-psi) = -0.9 here
    assert kappa * (-disc.psi_jet(0.9).psi) == pytest.approx(-0.9, abs=1e-12)
    assert euclid_curvature(disc_eval, 0.0, np.exp(0.3j)) == 0.0
    with pytest.raises(NotUnitTangent):
        euclid_curvature(disc_eval, 0.5, 2.0)


def test_hyperbolic_density_annulus_curvature():
    dom = Annulus(0.5)
    z0, h = 0.7 + 0.1j, 1e-4

    def logrho(z):
        return math.log(hyperbolic_density(dom, z))

    lap = (logrho(z0 + h) + logrho(z0 - h) + logrho(z0 + 1j * h) + logrho(z0 - 1j * h)
           - 4 * logrho(z0)) / h**2
    k = -lap * math.exp(-2 * logrho(z0))
    assert k == pytest.approx(-4.0, abs=1e-5)


def test_comparability_disc_identity(disc_eval, disc):
    (lo, hi), _ = comparability_report(disc_eval, disc, band=0.5)
    assert lo == pytest.approx(1.0, abs=1e-12)
    assert hi == pytest.approx(1.0, abs=1e-12)


def test_comparability_annulus_bands(annulus_eval, annulus):
    (lo1, hi1), _ = comparability_report(annulus_eval, annulus, band=0.1)
    assert 0.5 <= lo1 <= hi1 <= 2.0
    _, (lo2, hi2) = comparability_report(annulus_eval, annulus, band=1.0, delta_cap=1e-2)
    assert 0.9 <= lo2 <= hi2 <= 1.1


def test_tanh_geodesic(disc_eval):
    path = integrate_geodesic(disc_eval, GeodesicState(0.0, 1.0), 5.0, tol=1e-11)
    assert np.abs(path.z - np.tanh(path.t)).max() < 1e-8
    assert path.speed_drift < 1e-8
    # second differences on the adaptive grid are first-order accurate only
    assert path.ode_residual() < 0.05


def test_step_a_family(disc_eval):
    p0, theta = 0.5, math.pi / 4
    v0 = np.exp(1j * theta) * (1 - p0**2)
    path = integrate_geodesic(disc_eval, GeodesicState(p0, v0), 5.0, tol=1e-11)
    T = np.tanh(path.t)
    exact = (np.exp(1j * theta) * T + p0) / (1 + p0 * np.exp(1j * theta) * T)
    assert np.abs(path.z - exact).max() < 1e-7


def test_paper_ode_flag_changes_dynamics(disc_eval):
    path = integrate_geodesic(disc_eval, GeodesicState(0.0, 1.0), 2.0, tol=1e-11,
                              paper_ode=True)
    assert abs(path.z[-1] - np.tanh(2.0)) > 1e-2  # printed form misses tanh


def test_time_reversal(disc_eval):
    state = GeodesicState(0.2 + 0.1j, unit_capacity_velocity(disc_eval, 0.2 + 0.1j, 1 + 1j))
    fwd = integrate_geodesic(disc_eval, state, 4.0, tol=1e-11)
    back = integrate_geodesic(disc_eval, GeodesicState(fwd.z[-1], -fwd.v[-1]),
                              fwd.t[-1], tol=1e-11)
    assert abs(back.z[-1] - state.z) < 1e-6


def test_annulus_circle_geodesic_stays_circular():
    dom = Annulus(0.25)
    ev = make_evaluator(dom)
    rho = 0.5
    c = capacity_density(ev, rho)
    v0 = 1j / c
    period = 2 * math.pi * rho * c
    path = integrate_geodesic(ev, GeodesicState(rho, v0), period, tol=1e-12)
    assert np.abs(np.abs(path.z) - rho).max() < 1e-6


def test_escape_analysis_tanh(disc_eval):
    path = integrate_geodesic(disc_eval, GeodesicState(0.0, 1.0), 12.0, tol=1e-11)
    ea = escape_analysis(path)
    assert ea["rate"] == pytest.approx(2.0, abs=0.01)
    assert ea["r2"] > 0.9999
    assert ea["boundary_point"] == pytest.approx(1.0, abs=1e-6)
    assert ea["geometric_decay"]


def test_escape_analysis_annulus_radial(annulus_eval):
    v0 = unit_capacity_velocity(annulus_eval, 0.7, 1.0)
    path = integrate_geodesic(annulus_eval, GeodesicState(0.7, v0), 15.0, tol=1e-11)
    ea = escape_analysis(path)
    assert ea["r2"] > 0.99
    assert abs(ea["boundary_point"]) == pytest.approx(1.0, abs=1e-9)


def test_escape_analysis_rejects_closed_path():
    dom = Annulus(0.25)
    ev = make_evaluator(dom)
    cg = find_closed_geodesic(ev, dom, 1)
    with pytest.raises(NotEscaping):
        escape_analysis(cg.path)


def test_closed_geodesic_annulus_quarter():
    dom = Annulus(0.25)
    ev = make_evaluator(dom)
    cg = find_closed_geodesic(ev, dom, 1, ode_tol=2e-13)
    assert cg.radius == pytest.approx(0.5, abs=1e-10)
    assert cg.closure_error < 1e-6
    assert circle_criterion(ev, cg.radius) == pytest.approx(0.0, abs=1e-10)


def test_closed_geodesic_annulus_049_radius():
    dom = Annulus(0.49)
    ev = make_evaluator(dom)
    cg = find_closed_geodesic(ev, dom, 1, ode_tol=1e-11)
    assert cg.radius == pytest.approx(0.7, abs=1e-10)


def test_closed_geodesic_trivial_class(disc_eval):
    with pytest.raises(TrivialClass):
        find_closed_geodesic(disc_eval, UnitDisc(), 1)
    ev = make_evaluator(Annulus(0.25))
    with pytest.raises(TrivialClass):
        find_closed_geodesic(ev, Annulus(0.25), 0)


def test_closed_geodesic_double_winding():
    dom = Annulus(0.25)
    ev = make_evaluator(dom)
    cg1 = find_closed_geodesic(ev, dom, 1)
    cg2 = find_closed_geodesic(ev, dom, 2)
    assert cg2.length == pytest.approx(2 * cg1.length, rel=1e-12)


def test_closed_geodesic_length_stationary():
    # capacity length of concentric circles is minimal at the geodesic radius
    dom = Annulus(0.25)
    ev = make_evaluator(dom)

    def circle_length(rho):
        return 2 * math.pi * rho * capacity_density(ev, rho)

    base = circle_length(0.5)
    assert circle_length(0.501) > base
    assert circle_length(0.499) > base


def test_loop_shorten_matches_circle_criterion():
    # the discrete-polygon minimizer carries an O(h^2) radius bias
    dom = Annulus(0.25)
    ev = make_evaluator(dom)
    cg = loop_shorten(ev, dom, 1, n_vertices=96)
    assert cg.radius == pytest.approx(0.5, abs=2e-3)
    assert cg.stationarity < 1e-8


def test_spiral_disc_all_escape(disc_eval):
    with pytest.raises(AllEscaped):
        spiral_search(disc_eval, UnitDisc(), 0.3, horizon=30.0, n_angles=16)


def test_spiral_rejects_closed_geodesic_point():
    dom = Annulus(0.25)
    ev = make_evaluator(dom)
    with pytest.raises(ValueError, match="closed geodesic"):
        spiral_search(ev, dom, 0.5, horizon=10.0, n_angles=8)


def test_spiral_search_accumulates_on_waist():
    dom = Annulus(0.25)
    ev = make_evaluator(dom)
    try:
        rep = spiral_search(ev, dom, 0.6, horizon=30.0, n_angles=96,
                            refine_iters=40, raise_on_escape=True)
    except AllEscaped as exc:
        rep = exc.report
    assert rep.stay_time > 8.0  # well past one revolution near the waist
    mid = rep.radial_ranges[1]
    assert abs(0.5 * (mid[0] + mid[1]) - 0.5) < 0.02
    widths = [b - a for a, b in rep.radial_ranges]
    assert widths[1] < widths[0]
    assert rep.nonclosure_margin > 1e-4


def test_band_calibration():
    dom = Annulus(0.25)
    ev = make_evaluator(dom)
    eps = calibrate_band(ev, dom)
    assert 0.0 < eps <= 0.05 * dom.scale


def test_angle_monitor_radial_escape(disc_eval, disc):
    path = integrate_geodesic(disc_eval, GeodesicState(0.0, 1.0), 10.0, tol=1e-11)
    rows = geodesic_angle_monitor(path, disc)
    assert all(abs(r["angle"]) < 1e-8 for r in rows)
    assert rows[-1]["ratio"] == pytest.approx(2.0, abs=1e-3)
    assert all(r["estimate_I_ok"] for r in rows)


def test_angle_monitor_band_for_tilted_launch(disc_eval, disc):
    theta = math.pi / 4
    v0 = np.exp(1j * theta) * 1.0
    path = integrate_geodesic(disc_eval, GeodesicState(0.0, v0), 10.0, tol=1e-11)
    rows = geodesic_angle_monitor(path, disc)
    # estimate (II): the normal angle stays within its qualifying-time value
    start = abs(rows[0]["angle"])
    assert all(abs(r["angle"]) <= start + 0.05 for r in rows)


def test_angle_monitor_no_qualifying_time():
    dom = Annulus(0.25)
    ev = make_evaluator(dom)
    cg = find_closed_geodesic(ev, dom, 1)
    with pytest.raises(NoQualifyingTime):
        geodesic_angle_monitor(cg.path, dom)


def test_geodesic_conformal_invariance_mobius():
    """The Mobius image of a half-plane capacity geodesic is a disc geodesic."""
    from greenlab.geometry import HalfPlane
    from greenlab.green import mobius_halfplane_to_disc

    dom, phi, dphi = mobius_halfplane_to_disc()
    hp_eval = make_evaluator(dom)
    disc_eval = make_evaluator(UnitDisc())
    z0 = -0.8 + 0.3j
    v0 = unit_capacity_velocity(hp_eval, z0, np.exp(0.4j))
    hp_path = integrate_geodesic(hp_eval, GeodesicState(z0, v0), 3.0, tol=1e-12)
    disc_path = integrate_geodesic(
        disc_eval, GeodesicState(phi(z0), dphi(z0) * v0), 3.0, tol=1e-12
    )
    times = np.linspace(0.0, 3.0, 40)
    assert np.abs(phi(hp_path.sample(times)) - disc_path.sample(times)).max() < 1e-8


def test_escape_dichotomy_on_annulus_grid():
    """Each run either escapes with a clean exponential fit or stays in the
    calibrated band for its whole computed horizon - no third outcome."""
    dom = Annulus(0.25)
    ev = make_evaluator(dom)
    eps = calibrate_band(ev, dom)
    z0 = 0.6
    eps1 = min(eps, -dom.psi_jet(z0).psi)
    for angle in np.linspace(0.0, np.pi, 7):
        v0 = unit_capacity_velocity(ev, z0, np.exp(1j * angle))
        path = integrate_geodesic(ev, GeodesicState(z0, v0), 12.0, tol=1e-10)
        if path.status == "hit_stop_band":
            assert escape_analysis(path)["r2"] > 0.99
        else:
            assert (path.psi <= -eps1 * (1 - 1e-9)).all()
