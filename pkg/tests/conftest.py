"""Shared fixtures: unit systems for the fields the tests keep reusing."""
import numpy as np
import pytest

from cartan_entropy import IntPolynomial, unit_system_for

_CACHE = {}


def _system(coeffs):
    if coeffs not in _CACHE:
        _CACHE[coeffs] = unit_system_for(IntPolynomial(coeffs))
    return _CACHE[coeffs]


@pytest.fixture(scope="session")
def us49():
    return _system((1, -2, -1, 1))


@pytest.fixture(scope="session")
def us81():
    return _system((-1, -3, 0, 1))


@pytest.fixture(scope="session")
def us725():
    return _system((1, 1, -3, -1, 1))


@pytest.fixture(scope="session")
def us14641():
    return _system((-1, 3, 3, -4, -1, 1))


@pytest.fixture(scope="session")
def us300125():
    return _system((-1, -2, 7, 2, -7, -1, 1))


@pytest.fixture(scope="session")
def x49(us49):
    return np.asarray(us49.log_matrix, dtype=float)


@pytest.fixture(scope="session")
def x81(us81):
    return np.asarray(us81.log_matrix, dtype=float)


@pytest.fixture(scope="session")
def x725(us725):
    return np.asarray(us725.log_matrix, dtype=float)


@pytest.fixture(scope="session")
def x14641(us14641):
    return np.asarray(us14641.log_matrix, dtype=float)


@pytest.fixture(scope="session")
def x300125(us300125):
    return np.asarray(us300125.log_matrix, dtype=float)


@pytest.fixture(scope="session")
def golden_x():
    phi2 = np.log((3.0 + np.sqrt(5.0)) / 2.0)
    return np.array([[phi2], [-phi2]])
