import math

import numpy as np
import pytest

from greenlab.geometry import Annulus
from greenlab.green import AnnulusSeries


@pytest.mark.parametrize("r", [0.25, 0.5, 0.8])
def test_boundary_data_reproduced(r):
    ser = AnnulusSeries(Annulus(r))
    p = 0.5 * (r + 1) * np.exp(0.7j)
    theta = np.linspace(0, 2 * np.pi, 32, endpoint=False)
    for radius in (1.0, r):
        y = radius * np.exp(1j * theta)
        assert np.abs(ser.regular_part(y, p) - np.log(np.abs(y - p))).max() < 1e-13


def test_symmetry(annulus_eval, rng):
    for _ in range(10):
        z, p = (rng.uniform(0.52, 0.98) * np.exp(1j * rng.uniform(0, 2 * np.pi))
                for _ in "zp")
        if abs(z - p) < 1e-3:
            continue
        assert annulus_eval.green(z, p) == pytest.approx(annulus_eval.green(p, z), abs=1e-13)


def test_harmonicity(annulus_eval):
    h = 1e-3
    p = 0.7 + 0.1j
    for z in (0.8j, -0.6 + 0.1j):
        vals = [annulus_eval.regular_part(z + dz, p)
                for dz in (h, -h, 1j * h, -1j * h, 0)]
        lap = (sum(vals[:4]) - 4 * vals[4]) / h**2
        assert abs(lap) < 1e-6


def test_robin_is_diagonal_value(annulus_eval):
    for p in (0.7, 0.55 * np.exp(2j), 0.95):
        assert annulus_eval.robin(p) == pytest.approx(
            float(annulus_eval.regular_part(p, p)), abs=1e-13
        )


def test_robin_blows_up_at_boundary(annulus_eval):
    values = [annulus_eval.robin(1 - 0.25 * 2.0**-j) for j in range(12)]
    # Lambda(p_j) < -j log 2 + C along the halving approach
    for j, val in enumerate(values):
        assert val < -j * math.log(2) + 2.0
    assert all(b < a for a, b in zip(values, values[1:]))


def test_h_derivatives_vs_finite_differences(annulus_eval):
    z, p = 0.62 + 0.31j, -0.7 + 0.1j
    h = 1e-5
    for n in (1, 2, 3):
        fd = (annulus_eval._h_derivative(z + h, p, n - 1) -
              annulus_eval._h_derivative(z - h, p, n - 1)) / (2 * h) if n > 1 else None
        val = annulus_eval._h_derivative(z, p, n)
        if n == 1:
            fd = ((annulus_eval.regular_part(z + h, p) - annulus_eval.regular_part(z - h, p))
                  / (2 * h)
                  - 1j * (annulus_eval.regular_part(z + 1j * h, p)
                          - annulus_eval.regular_part(z - 1j * h, p)) / (2 * h))
            # dH/dz = h'/2, and the fd above approximates 2 dH/dz = h'
            assert fd == pytest.approx(val, rel=1e-8)
        else:
            assert fd == pytest.approx(val, rel=1e-7)


def test_radial_profile_derivatives(annulus_eval):
    t, h = 0.55, 1e-6
    for order in (1, 2, 3):
        fd = (annulus_eval._F(t + h, order - 1) - annulus_eval._F(t - h, order - 1)) / (2 * h)
        assert fd == pytest.approx(annulus_eval._F(t, order), rel=1e-8)


def test_mixed_green_derivative_vs_fd(annulus_eval):
    z, w = 0.8j, 0.7
    h = 1e-5
    fd = ((annulus_eval.grad_green(z, w + h) - annulus_eval.grad_green(z, w - h)) / (2 * h)
          + 1j * (annulus_eval.grad_green(z, w + 1j * h)
                  - annulus_eval.grad_green(z, w - 1j * h)) / (2 * h)) / 2
    assert fd == pytest.approx(annulus_eval.d2_green_dz_dwbar(z, w), rel=1e-7)


def test_taylor_coefficient_scaling(annulus_eval):
    # c_1 from analytic differentiation matches the small-disc limit definition
    p = 0.7
    c1 = annulus_eval.taylor_coefficient(p, 1)
    rho = 1e-4
    samples = annulus_eval.regular_part(p + rho * np.exp(1j * np.array([0.0, np.pi])), p)
    slope = (samples[0] - samples[1]) / (2 * rho)
    assert slope == pytest.approx(c1.real, abs=1e-5)


def test_automorphism_invariance(annulus_eval):
    """z -> r/z is a conformal automorphism: Robin transforms covariantly."""
    r = 0.5
    for p in (0.7, 0.6 * np.exp(1.3j)):
        image = r / p
        deriv = abs(-r / p**2)
        assert annulus_eval.robin(p) == pytest.approx(
            annulus_eval.robin(image) - math.log(deriv), abs=1e-13
        )
