import numpy as np
import pytest

from trimerspec import critical_mass_star, gauss_grid, mass_params


@pytest.fixture(scope="session")
def m_star():
    return critical_mass_star(tol=1e-12)


@pytest.fixture(scope="session")
def params_unit():
    return mass_params(1.0)


@pytest.fixture(scope="session")
def grid200():
    return gauss_grid(200)


@pytest.fixture(scope="session")
def grid400():
    return gauss_grid(400)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)
