import math

import numpy as np
import pytest

from greenlab.asymptotics import (
    approach_sequence,
    bridging_identity_gap,
    residual_ratios,
    verify_capacity_limit,
    verify_cn_limits,
    verify_curvature_limit,
    verify_rescaled_convergence,
    verify_robin_derivative_limits,
    verify_robin_limit,
)
from greenlab.errors import RescaleTooExtreme
from greenlab.geometry import Annulus, HalfPlane, UnitDisc
from greenlab.green import make_evaluator


def test_sequence_construction(annulus):
    seq = approach_sequence(annulus, 1.0, J=6)
    assert len(seq.points) == 7
    assert seq.deltas[0] == pytest.approx(0.0625)  # quarter of the reach
    assert all(annulus.contains(p) for p in seq.points)
    assert seq.points[3] == pytest.approx(1 - 0.0625 / 8)


def test_robin_limit_disc_exact(disc_eval, disc):
    seq = approach_sequence(disc, 1.0, J=8)
    rows = verify_robin_limit(disc_eval, disc, seq)
    assert all(row.residual == 0.0 for row in rows)


def test_robin_limit_halfplane_exact(halfplane_eval, halfplane):
    seq = approach_sequence(halfplane, 0.0, J=8, delta0=0.5)
    assert all(r.residual < 1e-15 for r in verify_robin_limit(halfplane_eval, halfplane, seq))


def test_robin_limit_annulus(annulus_eval, annulus):
    seq = approach_sequence(annulus, 1.0, J=12)
    rows = verify_robin_limit(annulus_eval, annulus, seq)
    assert rows[0].predicted == pytest.approx(-math.log(0.75))
    assert rows[12].residual < 1e-3
    ratios = residual_ratios(rows)[6:12]
    assert max(ratios) <= 0.75


def test_robin_derivative_limits(annulus_eval, annulus, halfplane_eval, halfplane):
    seq = approach_sequence(annulus, 1.0, J=12)
    for ab in [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]:
        rows = verify_robin_derivative_limits(annulus_eval, annulus, seq, *ab)
        assert rows[12].residual < 1e-2
    hseq = approach_sequence(halfplane, 0.0, J=6, delta0=0.5)
    rows = verify_robin_derivative_limits(halfplane_eval, halfplane, hseq, 1, 1)
    assert rows[0].predicted == pytest.approx(-1.0)
    assert all(r.residual < 1e-14 for r in rows)


def test_disc_derivative_limit_linear_rate(disc_eval, disc):
    # measured = -conj(p), exactly; residual decays linearly in delta_j
    seq = approach_sequence(disc, 1.0, J=8)
    rows = verify_robin_derivative_limits(disc_eval, disc, seq, 1, 0)
    for row, delta in zip(rows, seq.deltas):
        assert row.measured == pytest.approx(-np.conj(row.p), abs=1e-13)
        assert row.residual == pytest.approx(delta, rel=1e-12)


def test_capacity_limits(annulus_eval, annulus, disc_eval, disc):
    seq = approach_sequence(annulus, 1.0, J=10)
    rows = verify_capacity_limit(annulus_eval, annulus, seq)
    assert rows[0].predicted == pytest.approx(0.75)
    assert rows[10].residual < 1e-2
    dseq = approach_sequence(disc, 1.0, J=6)
    drows = verify_capacity_limit(disc_eval, disc, dseq)
    assert all(r.measured == pytest.approx(1.0, abs=1e-14) for r in drows)


def test_curvature_limits(annulus_eval, annulus):
    seq = approach_sequence(annulus, 1.0, J=10)
    rows = verify_curvature_limit(annulus_eval, annulus, seq)
    assert rows[10].residual < 1e-2


def test_cn_limits(annulus_eval, annulus):
    seq = approach_sequence(annulus, 1.0, J=10)
    r1 = verify_cn_limits(annulus_eval, annulus, seq, 1)
    assert r1[0].predicted == pytest.approx(-0.75)
    assert r1[10].residual < 1e-2
    r2 = verify_cn_limits(annulus_eval, annulus, seq, 2)
    assert r2[10].residual < 1e-2


def test_cn_limits_with_pole_derivative(annulus_eval, annulus):
    seq = approach_sequence(annulus, 1.0, J=8)
    rows = verify_cn_limits(annulus_eval, annulus, seq, 1, alpha=1, beta=0)
    d0 = annulus.psi_jet(1.0).d_psi
    assert rows[0].predicted == pytest.approx(-d0**2)
    assert rows[8].residual < 2e-2


def test_tangential_approach_same_limits(annulus_eval, annulus):
    seq = approach_sequence(annulus, 1.0, J=10, tangential=True)
    rows = verify_robin_limit(annulus_eval, annulus, seq)
    assert rows[10].residual < 1e-3
    cap = verify_capacity_limit(annulus_eval, annulus, seq)
    assert cap[10].residual < 1e-2


def test_defining_function_independence():
    """Two distinct psi choices give covariant limits, both verified."""
    results = {}
    for variant in ("product", "radial"):
        dom = Annulus(0.5, psi_variant=variant)
        ev = make_evaluator(dom)
        seq = approach_sequence(dom, 1.0, J=12)
        rows = verify_robin_limit(ev, dom, seq)
        assert rows[12].residual < 1e-3
        results[variant] = rows[0].predicted
    # the limits differ (they see different |dpsi|) but each pair matched
    assert results["product"] == pytest.approx(-math.log(0.75))
    assert results["radial"] == pytest.approx(-math.log(math.log(2.0) / 2))
    rel = abs(results["product"] - results["radial"]) / abs(results["product"])
    assert rel > 0.1  # genuinely distinct normalizations


def test_rescaled_convergence_disc(disc_eval, disc):
    seq = approach_sequence(disc, 1.0, J=4, delta0=0.5)
    rows = verify_rescaled_convergence(disc, 1.0, seq)
    # lambda vanishes identically on the disc: transport is exact
    assert all(row.residual < 1e-10 for row in rows)


def test_rescaled_convergence_annulus(annulus):
    seq = approach_sequence(annulus, 1.0, J=2)
    rows = verify_rescaled_convergence(annulus, 1.0, seq)
    ratios = residual_ratios(rows)
    assert all(0.4 < r < 0.6 for r in ratios)  # halves per step
    # the dense rescaled solve reproduces the exact transport identity
    ev = make_evaluator(annulus)
    direct = verify_robin_limit(ev, annulus, seq)
    for bie_row, ser_row in zip(rows, direct):
        assert bie_row.measured == pytest.approx(ser_row.measured, abs=1e-9)


def test_rescaled_guard(annulus):
    seq = approach_sequence(annulus, 1.0, J=12)
    with pytest.raises(RescaleTooExtreme):
        verify_rescaled_convergence(annulus, 1.0, seq)


def test_bridging_identity(annulus_eval, annulus):
    for ab in [(0, 0), (1, 0), (1, 1)]:
        assert bridging_identity_gap(annulus_eval, annulus, 0.9, *ab) < 1e-12
