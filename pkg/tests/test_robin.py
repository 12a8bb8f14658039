import math

import numpy as np
import pytest

from greenlab import robin as R
from greenlab.errors import DiscNotContained, GreenLabError, PoleOnCircle, StepTooLarge
from greenlab.geometry import Annulus, HalfPlane, UnitDisc


def test_circle_mean_consistency_at_center(disc_eval):
    # log r + mean G cancels exactly for the disc pole at the origin
    assert R.robin_constant(disc_eval, 0.0, 0.5) == pytest.approx(0.0, abs=1e-14)


def test_circle_mean_disc_example(disc_eval):
    assert R.robin_constant(disc_eval, 0.5, 0.2) == pytest.approx(math.log(0.75), abs=1e-13)


def test_circle_mean_halfplane(halfplane_eval):
    assert R.robin_constant(halfplane_eval, -1.0, 0.4) == pytest.approx(math.log(2), abs=1e-13)


def test_radius_independence(annulus_eval):
    p = 0.7 + 0.1j
    v1 = R.robin_constant(annulus_eval, p, 0.08)
    v2 = R.robin_constant(annulus_eval, p, 0.035)
    assert abs(v1 - v2) < 1e-10


def test_disc_not_contained_raised(disc_eval):
    with pytest.raises(DiscNotContained):
        R.robin_constant(disc_eval, 0.9, 0.5)


def test_derivatives_disc_symmetry(disc_eval):
    assert abs(R.robin_derivatives(disc_eval, 0.0, 1, 0)) < 1e-14


def test_derivatives_disc_value(disc_eval):
    assert R.robin_derivatives(disc_eval, 0.5, 1, 0) == pytest.approx(-2 / 3, abs=1e-12)


def test_derivatives_halfplane_value(halfplane_eval):
    assert R.robin_derivatives(halfplane_eval, -1.0, 1, 0) == pytest.approx(-0.5, abs=1e-12)


@pytest.mark.parametrize("ab", [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1)])
def test_derivatives_match_analytic_annulus(annulus_eval, ab):
    p = 0.7 + 0.1j
    integral = R.robin_derivatives(annulus_eval, p, *ab)
    analytic = annulus_eval.robin_derivative(p, *ab)
    assert integral == pytest.approx(analytic, abs=1e-11)


def test_derivatives_match_finite_differences(annulus_eval):
    p, h = 0.72, 1e-5
    fd = ((annulus_eval.robin(p + h) - annulus_eval.robin(p - h)) / (2 * h)
          - 1j * (annulus_eval.robin(p + 1j * h) - annulus_eval.robin(p - 1j * h)) / (2 * h)) / 2
    assert R.robin_derivatives(annulus_eval, p, 1, 0) == pytest.approx(fd, abs=1e-8)


def test_pole_on_circle_guard(disc_eval):
    with pytest.raises(PoleOnCircle):
        R.robin_derivatives(disc_eval, 0.5, 1, 0, q0=0.3, r=0.2)


def test_poisson_integral_reproduces_offcenter_robin(disc_eval):
    # Eq for Lambda(q) with q != q0 inside the circle
    lam = R.robin_derivatives(disc_eval, 0.45, 0, 0, q0=0.4, r=0.3)
    assert lam == pytest.approx(math.log(1 - 0.45**2), abs=1e-10)


def test_capacity_examples(disc_eval, halfplane_eval):
    assert R.capacity_density(disc_eval, 0.5) == pytest.approx(4 / 3)
    assert R.capacity_density(halfplane_eval, -1.0) == pytest.approx(0.5)


def test_normalized_robin_disc_is_zero(disc_eval, disc):
    for p in (0.0, 0.5, 0.3 + 0.4j, 0.9j):
        assert R.normalized_robin(disc_eval, disc, p) == pytest.approx(0.0, abs=1e-14)


def test_taylor_disc_center_vanishes(disc_eval):
    cs = R.taylor_coefficients(disc_eval, 0.0, 4)
    assert max(abs(c) for c in cs[1:]) < 1e-14


def test_taylor_disc_c1(disc_eval):
    cs = R.taylor_coefficients(disc_eval, 0.5, 2)
    assert cs[1] == pytest.approx(-2 / 3, abs=1e-13)


def test_taylor_halfplane_c2(halfplane_eval):
    cs = R.taylor_coefficients(halfplane_eval, -1.0, 2)
    assert cs[2] == pytest.approx(-1 / 8, abs=1e-13)


def test_taylor_c0_equals_robin(annulus_eval):
    p = 0.66 + 0.2j
    cs = R.taylor_coefficients(annulus_eval, p, 1)
    assert cs[0] == pytest.approx(annulus_eval.robin(p), abs=1e-10)


def test_taylor_integral_cross_check(annulus_eval):
    p = 0.7 + 0.1j
    for n in (1, 2):
        fft_value = R.taylor_coefficients(annulus_eval, p, n)[n]
        integral = R.taylor_coefficient_integral(annulus_eval, p, n)
        assert fft_value == pytest.approx(integral, abs=1e-11)


def test_taylor_matches_analytic_derivatives(annulus_eval):
    p = -0.6 + 0.25j
    cs = R.taylor_coefficients(annulus_eval, p, 3)
    for n in (1, 2, 3):
        assert cs[n] == pytest.approx(annulus_eval.taylor_coefficient(p, n), abs=1e-11)


def test_grad_lambda_zero_on_disc(disc_eval, disc):
    assert abs(R.grad_lambda_fd(disc_eval, disc, 0.3 + 0.2j)) < 1e-10


def test_grad_lambda_c1_cauchy(annulus_eval, annulus):
    g1 = R.grad_lambda_fd(annulus_eval, annulus, 0.7)
    g2 = R.grad_lambda_fd(annulus_eval, annulus, 0.7 + 1e-4)
    assert abs(g1 - g2) < 1e-2


def test_grad_lambda_sequence_cauchy(annulus_eval, annulus):
    grads = [R.grad_lambda_fd(annulus_eval, annulus, 1 - 0.25 * 2.0**-j) for j in range(13)]
    diffs = [abs(b - a) for a, b in zip(grads[-5:], grads[-4:])]
    assert max(diffs) < 1e-2


def test_grad_lambda_step_guard(disc_eval, disc):
    with pytest.raises(StepTooLarge):
        R.grad_lambda_fd(disc_eval, disc, 0.99, h=0.1)


def test_taylor_radius_floor(disc_eval):
    from greenlab.errors import RadiusTooSmall

    with pytest.raises(RadiusTooSmall):
        R.taylor_coefficients(disc_eval, 0.5, 2, rho=1e-8)


def test_sinh_identity_exact_on_disc(disc_eval):
    """|dG|/sinh G equals the capacity density exactly on the disc (Blaschke
    computation), so the residual vanishes everywhere, not just near dD."""
    for p, a in [(0.99, 0.0), (0.5, 0.0), (0.3 + 0.4j, -0.2 + 0.1j)]:
        assert abs(R.sinh_identity_residual(disc_eval, p, a)) < 1e-12


def test_sinh_identity_annulus_decay(annulus_eval):
    # the hole separating a from the approach makes the residual visible
    residuals = [abs(R.sinh_identity_residual(annulus_eval, 1 - 0.4 * 2.0**-j, -0.8))
                 for j in range(2, 13)]
    assert all(b < a for a, b in zip(residuals, residuals[1:]))
    assert residuals[-1] < 1e-6


def test_sinh_identity_annulus_nonzero_away(annulus_eval):
    assert abs(R.sinh_identity_residual(annulus_eval, 0.6, -0.8)) > 0.1


def test_build_report(annulus_eval, annulus):
    report = R.build_report(annulus_eval, annulus, 0.7, order=2, n_max=3)
    assert report.capacity == pytest.approx(math.exp(-report.robin))
    assert (1, 1) in report.derivatives
    data = report.to_dict()
    assert data["p"] == [0.7, 0.0]
    assert len(data["c_n"]) == 4
