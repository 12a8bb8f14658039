import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenlab.errors import CoincidentPoints, GridTouchesPole, NotInDomain
from greenlab.geometry import Annulus, HalfPlane, UnitDisc, rescale
from greenlab.green import (
    AffineImageGreen,
    HalfPlaneClosedForm,
    green_convergence_report,
    make_evaluator,
    mobius_halfplane_to_disc,
)


def test_disc_green_example(disc_eval):
    assert disc_eval.green(0.5, 0.0) == pytest.approx(-math.log(0.5), abs=1e-15)


def test_halfplane_green_example(halfplane_eval):
    # mirror of -1 across {Re z = 0} is +1
    assert halfplane_eval.green(-2.0, -1.0) == pytest.approx(math.log(3.0), abs=1e-15)


def test_disc_regular_part_examples(disc_eval):
    assert disc_eval.regular_part(0.0, 0.0) == 0.0
    assert disc_eval.regular_part(0.5, 0.5) == pytest.approx(math.log(0.75), abs=1e-15)


def test_halfplane_regular_part_derivative(halfplane_eval):
    # dH/dz is the Wirtinger derivative of Re log(z - p*), i.e. half of the
    # holomorphic completion derivative 1/(p - p*) = -1/2
    assert halfplane_eval.regular_part_dz(-1.0, -1.0, 1) == pytest.approx(-0.25)
    assert 2.0 * halfplane_eval.regular_part_dz(-1.0, -1.0, 1) == pytest.approx(
        halfplane_eval.taylor_coefficient(-1.0, 1)
    )


def test_green_positive_and_boundary_vanishing(disc_eval):
    p = 0.3 + 0.2j
    for s in (1e-2, 1e-3, 1e-4):
        z = (1 - s) * np.exp(0.4j)
        g = disc_eval.green(z, p)
        assert g > 0
        assert g / s == pytest.approx(2 * abs(disc_eval.grad_green(z, p)) * 1.0, rel=0.2)


def test_coincident_points_raise(disc_eval):
    with pytest.raises(CoincidentPoints):
        disc_eval.green(0.5, 0.5)
    with pytest.raises(NotInDomain):
        disc_eval.green(1.2, 0.0)


@given(st.integers(0, 10**6))
@settings(max_examples=10, deadline=None)
def test_conformal_covariance_mobius(seed):
    """Robin transform Lambda_H(p) = Lambda_D(M(p)) - log|M'(p)| to 1e-12."""
    rng = np.random.default_rng(seed)
    dom, phi, dphi = mobius_halfplane_to_disc()
    hp_eval = HalfPlaneClosedForm(dom)
    disc_eval = make_evaluator(UnitDisc())
    p = complex(rng.uniform(-3, 0.45), rng.uniform(-2, 2))
    if not dom.contains(p):
        return
    lhs = hp_eval.robin(p)
    rhs = disc_eval.robin(phi(p)) - math.log(abs(dphi(p)))
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_green_conformal_invariance_mobius():
    dom, phi, _ = mobius_halfplane_to_disc()
    hp_eval = HalfPlaneClosedForm(dom)
    disc_eval = make_evaluator(UnitDisc())
    z, p = -0.7 + 0.4j, -1.2 - 0.3j
    assert hp_eval.green(z, p) == pytest.approx(disc_eval.green(phi(z), phi(p)), abs=1e-13)


def test_affine_image_transport(disc_eval):
    tmap, _ = rescale(UnitDisc(), 0.5)
    image = AffineImageGreen(disc_eval, tmap)
    z, p = tmap.forward(0.2 + 0.1j), tmap.forward(-0.3j)
    assert image.green(z, p) == pytest.approx(disc_eval.green(0.2 + 0.1j, -0.3j), abs=1e-14)
    # Robin transforms with the log of the scale factor
    assert image.robin(tmap.forward(0.1)) == pytest.approx(
        disc_eval.robin(0.1) - math.log(tmap.s), abs=1e-14
    )


def test_convergence_report_annulus_family(annulus_eval):
    evals = [make_evaluator(Annulus(0.5 + 2.0 ** -(j + 3))) for j in range(6)]
    theta = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    grid = np.concatenate([rho * np.exp(1j * theta) for rho in (0.85, 0.9)])
    sups = green_convergence_report(evals, annulus_eval, 0.75, grid)
    ratios = [b / a for a, b in zip(sups, sups[1:])]
    assert all(r < 0.65 for r in ratios)  # roughly halves per step
    assert all(0.3 < r for r in ratios[2:])


def test_convergence_report_rescaled_discs_to_halfplane(disc_eval):
    """Blow-ups of the disc at p_j -> 1 approach the half-plane Green function."""
    limit = HalfPlaneClosedForm(HalfPlane(1.0, -1.0))
    grid = np.array([-2.0 + 0.6 * np.exp(1j * t) for t in np.linspace(0, 2 * np.pi, 12)])
    evals = []
    for j in (2, 3, 4, 5, 6):  # j = 1 rescales too little: K not yet inside T_j(D)
        tmap, _ = rescale(UnitDisc(), 1 - 2.0**-j)
        evals.append(AffineImageGreen(disc_eval, tmap))
    sups = green_convergence_report(evals, limit, -0.5, grid)
    ratios = [b / a for a, b in zip(sups, sups[1:])]
    assert all(r < 0.6 for r in ratios)  # roughly halves per step
    assert sups[-1] < 0.1 * sups[0]


def test_convergence_report_constant_sequence(disc_eval):
    grid = np.array([0.3, 0.4j, -0.2 - 0.2j])
    sups = green_convergence_report([disc_eval, disc_eval], disc_eval, 0.6, grid)
    assert sups == [0.0, 0.0]


def test_convergence_grid_touching_pole(disc_eval):
    with pytest.raises(GridTouchesPole):
        green_convergence_report([disc_eval], disc_eval, 0.3, np.array([0.3]))
