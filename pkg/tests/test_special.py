import math

import mpmath
import numpy as np
import pytest
import sympy

from trimerspec import (DomainError, SectorError, c_ell, integrate_finite,
                        legendre_p, mass_params, phi_ell, phi_values, theta)
from trimerspec.special import SERIES_TERMS, Z_SWITCH, _phi_series


def rodrigues_oracle(ell):
    """Symbolic Rodrigues-formula Legendre polynomial, the test oracle."""
    y = sympy.symbols("y")
    expr = sympy.diff((y ** 2 - 1) ** ell, y, ell) / (2 ** ell * sympy.factorial(ell))
    return sympy.lambdify(y, sympy.expand(expr), "numpy")


def test_legendre_simple_values():
    assert legendre_p(1, 0.3) == pytest.approx(0.3, abs=0)
    assert legendre_p(3, 1.0) == pytest.approx(1.0, rel=1e-14)
    oracle = rodrigues_oracle(5)
    assert legendre_p(5, 0.7) == pytest.approx(float(oracle(0.7)), abs=1e-12)


def test_legendre_matches_rodrigues(rng):
    ys = rng.uniform(-1.0, 1.0, size=50)
    for ell in range(8):
        oracle = rodrigues_oracle(ell)
        expected = np.asarray(oracle(ys), dtype=float) * np.ones_like(ys)
        np.testing.assert_allclose(legendre_p(ell, ys), expected, atol=1e-12)


def test_legendre_domain():
    with pytest.raises(DomainError):
        legendre_p(2, 1.5)
    with pytest.raises(DomainError):
        legendre_p(-1, 0.0)


def test_phi1_closed_form_value():
    # phi_1(2) = 2 - 2 ln 3, cross-checked by adaptive quadrature of the
    # defining integrand.
    expected = 2.0 - 2.0 * math.log(3.0)
    ev = phi_ell(1, 2.0)
    assert ev.method == "closed-form"
    assert ev.value == pytest.approx(expected, rel=1e-13)
    direct = integrate_finite(lambda y: y / (y + 2.0), -1.0, 1.0, tol=1e-13)
    assert ev.value == pytest.approx(direct.value, rel=1e-11)


def test_phi_ordering_and_sign():
    # phi_1 < phi_3 < phi_5 < 0 pointwise
    for z in np.geomspace(1.05, 1e4, 40):
        v1, v3, v5 = (phi_ell(ell, float(z)).value for ell in (1, 3, 5))
        assert v1 < v3 < v5 < 0.0


def test_phi_increasing_in_z():
    for ell in (1, 3, 5):
        zs = np.geomspace(1.05, 1e4, 60)
        vals = phi_values(ell, zs)
        assert np.all(np.diff(vals) > 0.0)


def test_phi1_envelope_bound():
    # |phi_1(z)| <= (2/3)/(z-1)^2 since Int (1-y^2) dy = 4/3
    for z in (1.1, 2.0, 10.0):
        assert abs(phi_ell(1, z).value) <= (2.0 / 3.0) / (z - 1.0) ** 2


def test_phi_branch_overlap_two_decades():
    # The branches must agree to 1e-9 relative across [Z_SWITCH/10, Z_SWITCH*10].
    zs = np.geomspace(Z_SWITCH / 10.0, Z_SWITCH * 10.0, 41)
    for ell in (1, 3, 5):
        series = _phi_series(ell, zs, SERIES_TERMS)
        if ell == 1:
            other = 2.0 - zs * np.log1p(2.0 / (zs - 1.0))
        else:
            other = np.array([
                -(2.0 ** -ell) * integrate_finite(
                    lambda y, z=z: (1.0 - y * y) ** ell / (y + z) ** (ell + 1),
                    -1.0, 1.0, tol=1e-13).value
                for z in zs])
        np.testing.assert_allclose(series, other, rtol=1e-9)


def test_phi_scalar_matches_vectorised():
    zs = np.geomspace(1.02, 1e6, 25)
    for ell in (1, 3, 5):
        vec = phi_values(ell, zs)
        scalars = np.array([phi_ell(ell, float(z)).value for z in zs])
        np.testing.assert_allclose(vec, scalars, rtol=1e-10)


def test_phi_quadrature_matches_direct_legendre_form():
    # At moderate z the defining integrand Int P_ell/(y+z) has no cancellation
    # problem and cross-checks the by-parts route.
    for ell in (3, 5):
        for z in (1.2, 2.0, 5.0, 20.0):
            direct = integrate_finite(
                lambda y: legendre_p(ell, y) / (y + z), -1.0, 1.0, tol=1e-13)
            assert phi_ell(ell, z).value == pytest.approx(direct.value, rel=1e-9)


def test_phi_domain_and_sector():
    with pytest.raises(DomainError):
        phi_ell(1, 1.0)
    with pytest.raises(SectorError):
        phi_ell(2, 2.0)
    with pytest.raises(SectorError):
        phi_ell(0, 2.0)


def test_correction_constants(m_star):
    assert c_ell(1, m_star) == pytest.approx(2.74, abs=0.01)
    assert c_ell(3, m_star) == pytest.approx(6.07, abs=0.01)


def test_correction_constant_tangency(m_star):
    # C_ell g_ell(1+m*) = |phi_ell(1+m*)| by construction
    for ell in (1, 3):
        z0 = 1.0 + m_star
        moment = integrate_finite(lambda y: (1.0 - y * y) ** ell, -1.0, 1.0,
                                  tol=1e-13).value
        g = 2.0 ** -ell * moment / z0 ** (ell + 1)
        assert c_ell(ell, m_star) * g == pytest.approx(
            abs(phi_ell(ell, z0).value), abs=1e-8)


def test_theta_zero_and_domain(params_unit):
    assert theta(1.0, 0.0, params_unit) == 0.0
    assert theta(2.5, 0.0, params_unit) == 0.0
    with pytest.raises(DomainError):
        theta(0.0, 1.0, params_unit)
    with pytest.raises(DomainError):
        theta(-1.0, 1.0, params_unit)
    with pytest.raises(DomainError):
        theta(1.0, -1.0, params_unit)


def test_theta_small_r_limit(params_unit):
    # theta_1(r)^2/r^2 -> nu/2 as r -> 0; arbitrary-precision oracle
    r = 1e-6
    val = theta(1.0, r, params_unit) ** 2 / r ** 2
    with mpmath.workdps(50):
        nu = mpmath.mpf(3) / 4
        oracle = (mpmath.sqrt(nu * mpmath.mpf(r) ** 2 + 1) - 1) / mpmath.mpf(r) ** 2
    assert val == pytest.approx(float(oracle), rel=1e-12)
    assert val == pytest.approx(params_unit.nu / 2.0, rel=1e-6)


def test_theta_large_r_limit(params_unit):
    # Approach rate is O(1/r): the residual at r = 1e6 is ~6e-7.
    r = 1e6
    assert theta(1.0, r, params_unit) / math.sqrt(r) == pytest.approx(
        params_unit.nu ** 0.25, rel=1e-5)
