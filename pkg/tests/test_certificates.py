import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from trimerspec import (DomainError, SectorError, absence_threshold,
                        certify_ell1, certify_ell3, gauss_grid, mass_params,
                        numeric_kernel_norm)
from trimerspec.certificates import (amplitude_ell1, amplitude_ell3, rmax_ell1,
                                     rmax_ell3, top_two_singular_values)


def test_absence_root_location():
    root = absence_threshold(tol=1e-10)
    assert root == pytest.approx(0.382, abs=1e-3)
    assert 1.0 / root == pytest.approx(2.617, abs=5e-3)
    # just above the root the certificate really certifies
    assert certify_ell1(root + 0.01).certifies_absence
    assert not certify_ell1(root - 0.01).certifies_absence


def test_certificate_monotone_decreasing():
    masses = [0.2, 0.4, 0.8]
    bounds1 = [certify_ell1(m).bound for m in masses]
    bounds3 = [certify_ell3(m).bound for m in masses]
    assert all(a > b for a, b in zip(bounds1, bounds1[1:]))
    assert all(a > b for a, b in zip(bounds3, bounds3[1:]))


def test_certificate_monotone_on_grid(m_star):
    masses = np.geomspace(m_star * 1.5, 10.0, 64)
    bounds = [certify_ell1(float(m)).bound for m in masses]
    assert all(a > b for a, b in zip(bounds, bounds[1:]))


def test_certify_ell1_below_one_at_unit_mass():
    cert = certify_ell1(1.0)
    assert cert.bound < 1.0 and cert.certifies_absence


def test_certify_ell3_at_critical_mass(m_star):
    cert = certify_ell3(m_star)
    p = mass_params(m_star)
    assert p.mu == pytest.approx(1.86, abs=0.01)
    assert p.nu == pytest.approx(0.13, abs=0.005)
    assert cert.intermediates["r_max"] == pytest.approx(1.57, abs=0.01)
    assert cert.intermediates["a_max"] == pytest.approx(6.22, abs=0.01)
    assert cert.bound == pytest.approx(0.87, abs=0.01)
    assert cert.certifies_absence


def test_certify_ell3_whole_range(m_star):
    for m in np.geomspace(m_star * 1.001, 10.0, 24):
        assert certify_ell3(float(m)).bound < 1.0


def test_certificate_domain(m_star):
    with pytest.raises(DomainError):
        certify_ell1(m_star * 0.5)
    with pytest.raises(DomainError):
        certify_ell3(m_star * 0.5)


def test_rmax_matches_dense_scan():
    # The printed closed forms are transcription-fragile; the scan is the net.
    for m in np.geomspace(0.08, 8.0, 10):
        nu = mass_params(float(m)).nu
        for rmax_fn, amp in ((rmax_ell1, amplitude_ell1), (rmax_ell3, amplitude_ell3)):
            closed = rmax_fn(nu)
            scan = minimize_scalar(lambda r: -amp(r, nu), bounds=(1e-3, 50.0),
                                   method="bounded",
                                   options={"xatol": 1e-10}).x
            assert closed == pytest.approx(scan, abs=1e-6)
            assert amp(closed, nu) >= amp(scan, nu) - 1e-12


def test_numeric_norm_below_schur_bound(grid200):
    for m in (0.2, 0.5):
        for ell, cert in ((1, certify_ell1(m)), (3, certify_ell3(m))):
            norm = numeric_kernel_norm(ell, m, grid200)
            assert norm <= cert.bound


def test_numeric_norm_ordering(grid200):
    norms = [numeric_kernel_norm(ell, 0.2, grid200) for ell in (1, 3, 5)]
    assert norms[0] > norms[1] > norms[2]


def test_numeric_norm_grid_stability():
    n1 = numeric_kernel_norm(1, 0.2, gauss_grid(200))
    n2 = numeric_kernel_norm(1, 0.2, gauss_grid(400))
    assert abs(n1 - n2) / n2 < 1e-4


def test_numeric_norm_matches_dense_eigensolver(grid200):
    from trimerspec import kernel_k

    m = 0.3
    p = mass_params(m)
    r, w = grid200.nodes, grid200.weights
    b = np.outer(np.sqrt(w) * r, np.sqrt(w) * r) * kernel_k(1, p, r[:, None], r[None, :])
    dense = np.max(np.abs(np.linalg.eigvalsh(b)))
    assert numeric_kernel_norm(1, m, grid200) == pytest.approx(dense, rel=1e-10)
    s1, s2 = top_two_singular_values(b)
    svals = np.sort(np.abs(np.linalg.eigvalsh(b)))[::-1]
    assert s1 == pytest.approx(svals[0], rel=1e-9)
    assert s2 == pytest.approx(svals[1], rel=1e-6)


def test_numeric_norm_sector_guard(grid200):
    with pytest.raises(SectorError):
        numeric_kernel_norm(2, 0.5, grid200)


def test_power_iteration_budget(grid200):
    from trimerspec import AccuracyError

    with pytest.raises(AccuracyError):
        numeric_kernel_norm(1, 0.5, grid200, tol=1e-15, max_iter=2)


def test_certificate_implies_no_candidates(grid200):
    # Cross-module consistency: wherever the Schur bound certifies absence,
    # the discretised sector operator must agree.
    from trimerspec import assemble_t1, sector_spectrum

    for m in (0.45, 0.8):
        cert = certify_ell1(m)
        assert cert.certifies_absence
        assert numeric_kernel_norm(1, m, grid200) < 1.0
        pairs = sector_spectrum(assemble_t1(1, mass_params(m), grid200), count=3)
        assert not any(p.candidate for p in pairs)
