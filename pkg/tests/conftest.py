import numpy as np
import pytest

from qgnn.utilities import FIXTURES, load_fixture, load_goldens


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def path2():
    return load_fixture("path-2")


@pytest.fixture
def triangle():
    return load_fixture("triangle")


@pytest.fixture
def star4():
    return load_fixture("star-4")


@pytest.fixture
def random8():
    return load_fixture("random-8")


@pytest.fixture(params=FIXTURES)
def fixture_graph(request):
    return load_fixture(request.param)


@pytest.fixture(params=("path-2", "triangle", "star-4"))
def small_graph(request):
    return load_fixture(request.param)


@pytest.fixture(scope="session")
def goldens():
    return load_goldens()
