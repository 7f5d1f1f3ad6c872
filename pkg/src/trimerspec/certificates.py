"""Closed-form Schur bounds certifying the absence of bound states.

A Schur test with weight theta_1(r)/r^2 (sector 1) or theta_1(r)/r (sector 3)
bounds the sector kernel norm by an explicit constant

    C(m) = multiplier(m) * A(r_max(m)),

where A is a ratio of powers of r, theta_1(r)^2 and (1+r^2), maximised in
closed form at r_max.  ||K_ell|| < 1 certifies that the shifted charge
operator dominates 2 pi^2 on the sector, hence no bound states there.  Both
C(m) factors decrease strictly in m, so the unique root of C(m) = 1 in
sector 1 is an upper bound on the true absence threshold (reported strictly
as such, never as the threshold itself).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .charge_operator import kernel_k
from .errors import AccuracyError, DomainError, SectorError
from .masses import MassParams, critical_mass_star, mass_params
from .quadrature import RadialGrid
from .roots import find_root
from .special import c_ell


@lru_cache(maxsize=1)
def _mstar() -> float:
    return critical_mass_star(tol=1e-12)


@lru_cache(maxsize=8)
def _correction_constant(ell: int) -> float:
    return c_ell(ell, _mstar())


@dataclass(frozen=True)
class Certificate:
    """One Schur bound evaluation: bound < 1 certifies absence."""

    ell: int
    m: float
    bound: float
    certifies_absence: bool
    intermediates: dict

    def __post_init__(self):
        if self.certifies_absence != (self.bound < 1.0):
            raise ValueError("certifies_absence must mirror bound < 1")


def amplitude_ell1(r, nu: float):
    """Schur amplitude A(r) = r^3 / (theta_1(r)^2 (1+r^2)) for sector 1."""
    arr = np.asarray(r, dtype=float)
    t2 = nu * arr * arr / (np.sqrt(nu * arr * arr + 1.0) + 1.0)
    val = arr ** 3 / (t2 * (1.0 + arr * arr))
    return val if arr.shape else float(val)


def amplitude_ell3(r, nu: float):
    """Schur amplitude A(r) = r^4 / (theta_1(r)^2 (1+r^2)^{3/2}) for sector 3."""
    arr = np.asarray(r, dtype=float)
    t2 = nu * arr * arr / (np.sqrt(nu * arr * arr + 1.0) + 1.0)
    val = arr ** 4 / (t2 * (1.0 + arr * arr) ** 1.5)
    return val if arr.shape else float(val)


def rmax_ell1(nu: float) -> float:
    """Closed-form argmax of the sector-1 amplitude."""
    return math.sqrt(-1.0 + 2.0 * nu + 2.0 * math.sqrt(1.0 - nu + nu * nu))


def rmax_ell3(nu: float) -> float:
    """Closed-form argmax of the sector-3 amplitude."""
    return math.sqrt(1.5 * math.sqrt(9.0 * nu * nu - 4.0 * nu + 4.0) + 4.5 * nu - 1.0)


def certify_ell1(m: float) -> Certificate:
    """Sector-1 Schur certificate C(m) = mu C_1 A(r_max) / (3 pi); m > m*."""
    p = mass_params(m)
    if p.m <= _mstar():
        raise DomainError(f"certificates exist only above the stability threshold "
                          f"m* = {_mstar():.6f}, got m = {m}")
    c1 = _correction_constant(1)
    rmax = rmax_ell1(p.nu)
    a_max = amplitude_ell1(rmax, p.nu)
    multiplier = p.mu * c1 / (3.0 * math.pi)
    bound = multiplier * a_max
    return Certificate(ell=1, m=p.m, bound=bound, certifies_absence=bound < 1.0,
                       intermediates={"r_max": rmax, "a_max": a_max,
                                      "multiplier": multiplier})


def certify_ell3(m: float) -> Certificate:
    """Sector-3 Schur certificate C(m) = (C_3/280) mu^3 A(r_max); m >= m*.

    Evaluable at m = m* itself, where its value ~0.87 < 1 already certifies
    the whole sector.
    """
    p = mass_params(m)
    if p.m < _mstar() * (1.0 - 1e-12):
        raise DomainError(f"certificates exist only from the stability threshold "
                          f"m* = {_mstar():.6f} upward, got m = {m}")
    c3 = _correction_constant(3)
    rmax = rmax_ell3(p.nu)
    a_max = amplitude_ell3(rmax, p.nu)
    multiplier = c3 / 280.0 * p.mu ** 3
    bound = multiplier * a_max
    return Certificate(ell=3, m=p.m, bound=bound, certifies_absence=bound < 1.0,
                       intermediates={"r_max": rmax, "a_max": a_max,
                                      "multiplier": multiplier})


def absence_threshold(tol: float = 1e-10) -> float:
    """Root of the sector-1 bound C(m) = 1 on (m*, 1].

    An upper bound on the true absence threshold: above this mass the
    certificate guarantees no bound states; below it the certificate is
    merely silent.  1/root is approximately 2.617.
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    lo = _mstar() * (1.0 + 1e-9)
    return find_root(lambda m: certify_ell1(m).bound - 1.0, lo, 1.0, tol=tol)


def numeric_kernel_norm(ell: int, m: float, grid: RadialGrid,
                        tol: float = 1e-12, max_iter: int = 20_000) -> float:
    """Largest singular value of the symmetrised Nystrom kernel matrix.

    The matrix sqrt(w_i r_i^2) K_ell(r_i, r_j) sqrt(w_j r_j^2) discretises
    K_ell on L^2(r^2 dr); power iteration on its Gram square gives the norm.
    Deterministic start vector (all ones: the kernel has one sign, so the top
    singular vector has full overlap with it).
    """
    if ell % 2 == 0 or ell < 1:
        raise SectorError(f"kernel norms are defined for odd sectors, got {ell}")
    p = mass_params(m)
    r, w = grid.nodes, grid.weights
    kernel = kernel_k(ell, p, r[:, None], r[None, :])
    sqw = np.sqrt(w) * r
    b = np.outer(sqw, sqw) * kernel
    sigma, _ = _power_iteration_gram(b, tol, max_iter)
    return sigma


def _power_iteration_gram(b: np.ndarray, tol: float, max_iter: int,
                          deflate: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    v = np.ones(b.shape[0])
    if deflate is not None:
        v -= deflate * (deflate @ v)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        u = b @ (b @ v)
        if deflate is not None:
            u -= deflate * (deflate @ u)
        norm = np.linalg.norm(u)
        if norm == 0.0:
            return 0.0, v
        u /= norm
        new_sigma = math.sqrt(norm)
        if abs(new_sigma - sigma) <= tol * max(new_sigma, 1e-300):
            return new_sigma, u
        sigma, v = new_sigma, u
    raise AccuracyError(f"power iteration did not converge in {max_iter} steps",
                        best_estimate=sigma)


def top_two_singular_values(b: np.ndarray, tol: float = 1e-12,
                            max_iter: int = 20_000) -> tuple[float, float]:
    """Top two singular values of a symmetric matrix by deflated power iteration."""
    s1, v1 = _power_iteration_gram(b, tol, max_iter)
    s2, _ = _power_iteration_gram(b, tol, max_iter, deflate=v1)
    return s1, s2
