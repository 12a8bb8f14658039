import math

import numpy as np
import pytest

from greenlab.errors import NonSmoothData, OrderTooHigh
from greenlab.geometry import Annulus, BoundaryCurve, SmoothDomain, UnitDisc
from greenlab.green import NystromGreen, solve_dirichlet


def test_constant_data_reproduced():
    sol = solve_dirichlet(UnitDisc(), lambda y: np.ones(y.shape))
    for z in (0.0, 0.5 + 0.3j, -0.8):
        assert sol.value(z) == pytest.approx(1.0, abs=1e-13)
    assert sol.boundary_residual < 1e-10


def test_harmonic_data_reproduced_on_annulus():
    sol = solve_dirichlet(Annulus(0.5), lambda y: np.log(np.abs(y)))
    for z in (0.7, 0.6j, -0.55 - 0.3j):
        assert sol.value(z) == pytest.approx(math.log(abs(z)), abs=1e-12)


def test_annulus_log_source_vs_series(annulus_eval):
    sol = solve_dirichlet(Annulus(0.5), lambda y: np.log(np.abs(y - 0.7)))
    for z in (0.6j, -0.6, 0.85):
        assert sol.value(z) == pytest.approx(annulus_eval.regular_part(z, 0.7), abs=1e-10)


def test_disc_green_matches_closed_form(disc_bie, disc_eval, rng):
    worst = 0.0
    for _ in range(15):
        z = rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        p = rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        if abs(z - p) < 1e-2:
            continue
        worst = max(worst, abs(disc_bie.green(z, p) - disc_eval.green(z, p)))
    assert worst < 1e-10


def test_green_symmetry_bie(disc_bie, rng):
    worst = 0.0
    for _ in range(10):
        z, p = (rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, 2 * np.pi)) for _ in "zp")
        if abs(z - p) < 1e-2:
            continue
        worst = max(worst, abs(disc_bie.green(z, p) - disc_bie.green(p, z)))
    assert worst < 1e-9


def test_annulus_bie_vs_series(annulus_bie, annulus_eval, rng):
    for _ in range(8):
        z = rng.uniform(0.55, 0.95) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        p = rng.uniform(0.55, 0.95) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        if abs(z - p) < 5e-2:
            continue
        assert annulus_bie.green(z, p) == pytest.approx(annulus_eval.green(z, p), abs=1e-8)
    assert annulus_bie.robin(0.7) == pytest.approx(annulus_eval.robin(0.7), abs=1e-10)


def test_regular_part_derivatives(disc_bie, disc_eval):
    z, p = 0.3 + 0.2j, 0.5
    for n in (1, 2):
        assert disc_bie.regular_part_dz(z, p, n) == pytest.approx(
            complex(disc_eval.regular_part_dz(z, p, n)), abs=1e-11
        )
    with pytest.raises(OrderTooHigh):
        disc_bie.regular_part_dz(z, p, 3)


def test_solution_is_harmonic(disc_bie):
    sol = disc_bie._solution_for(0.5 + 0.0j)
    h = 1e-3
    for z in (0.2 + 0.1j, -0.4j):
        lap = (sol.value(z + h) + sol.value(z - h) + sol.value(z + 1j * h)
               + sol.value(z - 1j * h) - 4 * sol.value(z)) / h**2
        assert abs(lap) < 1e-5  # O(h^2) floor of the 5-point stencil


def test_nonsmooth_data_guard():
    with pytest.raises(NonSmoothData):
        solve_dirichlet(UnitDisc(), lambda y: np.sign(np.real(y)), n_per_curve=64)


def test_ellipse_dirichlet_harmonic_polynomial():
    # u = Re z^2 is harmonic: the solver must reproduce it inside an ellipse
    curve = BoundaryCurve(np.array([0.5, 0.0, 1.5], dtype=complex))
    sol = solve_dirichlet(SmoothDomain([curve]), lambda y: np.real(y**2), n_per_curve=128)
    for z in (0.0, 0.5 + 0.2j, -1.0 + 0.3j):
        assert sol.value(z) == pytest.approx((z**2).real, abs=1e-11)


def test_smooth_two_curve_domain():
    # annulus presented as a generic two-curve smooth domain
    outer = BoundaryCurve(np.array([0.0, 0.0, 1.0], dtype=complex))
    inner = BoundaryCurve(np.array([0.5, 0.0, 0.0], dtype=complex))  # clockwise
    dom = SmoothDomain([outer, inner])
    ev = NystromGreen(dom, 256)
    from greenlab.green import AnnulusSeries

    ser = AnnulusSeries(Annulus(0.5))
    assert ev.green(0.75, -0.7j) == pytest.approx(ser.green(0.75, -0.7j), abs=1e-10)
