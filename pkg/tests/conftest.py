import numpy as np
import pytest

from toric.services.polytope_service import polytope_service
from toric.services.potential_service import potential_service
from toric.utils.sampling import random_interior_points


@pytest.fixture(scope="session")
def interval():
    return polytope_service.fixture("sphere-interval")


@pytest.fixture(scope="session")
def triangle():
    return polytope_service.fixture("cp2-triangle")


@pytest.fixture(scope="session")
def blowup():
    return polytope_service.fixture("cp2-blowup-4gon")


@pytest.fixture(scope="session")
def hexagon():
    return polytope_service.fixture("hexagon")


@pytest.fixture(scope="session")
def fixture_polytopes(interval, triangle, blowup, hexagon):
    return {"sphere-interval": interval, "cp2-triangle": triangle,
            "cp2-blowup-4gon": blowup, "hexagon": hexagon}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def sample_points(rng):
    """Seeded interior points kept a margin away from the boundary"""
    def sample(P, count, margin=0.05):
        return random_interior_points(P, count, rng, margin=margin)
    return sample


@pytest.fixture
def canonical():
    return potential_service.canonical_potential
