import numpy as np
import pytest

from greenlab.geometry import Annulus, HalfPlane, UnitDisc
from greenlab.green import AnnulusSeries, NystromGreen, make_evaluator


@pytest.fixture(scope="session")
def disc():
    return UnitDisc()


@pytest.fixture(scope="session")
def halfplane():
    return HalfPlane(1.0, 0.0)


@pytest.fixture(scope="session")
def annulus():
    return Annulus(0.5)


@pytest.fixture(scope="session")
def disc_eval(disc):
    return make_evaluator(disc)


@pytest.fixture(scope="session")
def halfplane_eval(halfplane):
    return make_evaluator(halfplane)


@pytest.fixture(scope="session")
def annulus_eval(annulus):
    return AnnulusSeries(annulus)


@pytest.fixture(scope="session")
def disc_bie(disc):
    return NystromGreen(disc, 256)


@pytest.fixture(scope="session")
def annulus_bie(annulus):
    return NystromGreen(annulus, 512)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
