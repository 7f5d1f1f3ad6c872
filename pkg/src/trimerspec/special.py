"""Legendre polynomials, the phi_ell integrals, correction constants, and the
square-root weight theta that factors the charge operator.

phi_ell(z) = Int_{-1}^{1} P_ell(y)/(y+z) dy  (z > 1, odd ell) is the angular
reduction of every odd-sector kernel.  It is negative, strictly increasing
toward 0, and of size z^{-(ell+1)}: evaluating the defining integral directly
at large z cancels catastrophically, so three branches are used:

* ell = 1: closed form 2 - z*log((z+1)/(z-1)) via log1p, below the switch;
* ell >= 3: quadrature of the single-signed integration-by-parts form
  -2^{-ell} Int (1-y^2)^ell / (y+z)^{ell+1} dy, below the switch;
* any odd ell: the inverse-power series obtained by expanding 1/(y+z)
  geometrically, above the switch.

The switch point and series length are configuration constants; the branch
overlap is required (and tested) to agree to 1e-9 relative across two decades.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import comb

from .errors import DomainError, SectorError
from .masses import MassParams
from .quadrature import gauss_legendre, integrate_finite

#: Above this z the inverse-power series replaces closed form / quadrature.
Z_SWITCH = 1e2
#: Number of inverse-power series terms (powers z^{-(ell+1)} .. z^{-(ell+1+2(k-1))}).
SERIES_TERMS = 6

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = gauss_legendre(n)
    return _GL_CACHE[n]


def legendre_p(ell: int, y):
    """P_ell(y) on [-1, 1] by the Bonnet three-term recurrence.

    Stable on the whole interval; the Rodrigues derivative form is kept only
    as a test oracle.  Accepts scalars or arrays.
    """
    if ell < 0 or ell != int(ell):
        raise DomainError(f"degree must be a non-negative integer, got {ell}")
    arr = np.asarray(y, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise DomainError("Legendre argument must lie in [-1, 1]")
    p_prev = np.ones_like(arr)
    if ell == 0:
        return p_prev if arr.shape else float(p_prev)
    p_cur = arr.copy()
    for k in range(1, int(ell)):
        p_prev, p_cur = p_cur, ((2 * k + 1) * arr * p_cur - k * p_prev) / (k + 1)
    return p_cur if arr.shape else float(p_cur)


@dataclass(frozen=True)
class PhiEval:
    """One phi_ell evaluation with the branch that produced it."""

    ell: int
    z: float
    value: float
    method: str  # "closed-form" | "quadrature" | "asymptotic"


def _require_odd_sector(ell: int) -> int:
    if ell != int(ell) or ell < 1 or ell % 2 == 0:
        raise SectorError(f"phi_ell is defined for odd positive ell, got {ell}")
    return int(ell)


def _series_coefficients(ell: int, terms: int) -> np.ndarray:
    # Geometric expansion of 1/(y+z) against the by-parts integrand:
    # phi_ell(z) = -2^{-ell} sum_j C(ell+2j, 2j) M_j z^{-(ell+1+2j)},
    # M_j = Int (1-y^2)^ell y^{2j} dy = B(j+1/2, ell+1).
    j = np.arange(terms)
    return 2.0 ** (-ell) * comb(ell + 2 * j, 2 * j) * beta_fn(j + 0.5, ell + 1.0)


def _phi_series(ell: int, z: np.ndarray, terms: int = SERIES_TERMS) -> np.ndarray:
    coeff = _series_coefficients(ell, terms)
    inv2 = z ** -2.0
    acc = np.zeros_like(z)
    for c in coeff[::-1]:
        acc = acc * inv2 + c
    return -acc * z ** (-(ell + 1.0))


def _phi1_closed(z: np.ndarray) -> np.ndarray:
    return 2.0 - z * np.log1p(2.0 / (z - 1.0))


def _phi1_scalar(z: float) -> float:
    # Fast scalar path for tight loops (witness residuals, m(s) integrands).
    if z > Z_SWITCH:
        acc = 0.0
        for c in _series_coefficients(1, SERIES_TERMS)[::-1]:
            acc = acc / (z * z) + c
        return -acc / (z * z)
    return 2.0 - z * math.log1p(2.0 / (z - 1.0))


def _phi_by_parts_gl(ell: int, z: np.ndarray, order: int) -> np.ndarray:
    # Accumulate node by node: keeps memory at O(len(z)) even for large orders.
    y, w = _gl(order)
    acc = np.zeros_like(z)
    for yk, wk in zip(y, w):
        acc += wk * (1.0 - yk * yk) ** ell / (yk + z) ** (ell + 1)
    return -(2.0 ** -ell) * acc


def phi_values(ell: int, z) -> np.ndarray:
    """Vectorised phi_ell over an array of arguments z > 1.

    Matches :func:`phi_ell` branch for branch; the quadrature branch uses an
    order-doubled Gauss rule on the by-parts integrand (single-signed, so the
    comparison controls relative error).
    """
    ell = _require_odd_sector(ell)
    z = np.asarray(z, dtype=float)
    if np.any(z <= 1.0):
        raise DomainError("phi_ell requires z > 1")
    out = np.empty_like(z)
    far = z > Z_SWITCH
    if np.any(far):
        out[far] = _phi_series(ell, z[far])
    near = ~far
    if np.any(near):
        zn = z[near]
        if ell == 1:
            out[near] = _phi1_closed(zn)
        else:
            order = 120
            prev = _phi_by_parts_gl(ell, zn, order)
            while True:
                order *= 2
                cur = _phi_by_parts_gl(ell, zn, order)
                if np.max(np.abs(cur - prev) / np.abs(cur)) < 1e-12 or order >= 960:
                    break
                prev = cur
            out[near] = cur
    return out


def phi_ell(ell: int, z: float) -> PhiEval:
    """phi_ell(z) for odd ell and z > 1, with the branch tag.

    ell = 1 uses the closed form 2 - z log((z+1)/(z-1)); ell >= 3 adaptive
    quadrature; above the cancellation switch all sectors use the series.
    """
    ell = _require_odd_sector(ell)
    z = float(z)
    if z <= 1.0:
        raise DomainError(f"phi_ell requires z > 1, got z={z}")
    if z > Z_SWITCH:
        value = float(_phi_series(ell, np.asarray([z]))[0])
        method = "asymptotic"
    elif ell == 1:
        value = float(_phi1_closed(np.asarray([z]))[0])
        method = "closed-form"
    else:
        res = integrate_finite(
            lambda y: (1.0 - y * y) ** ell / (y + z) ** (ell + 1), -1.0, 1.0,
            tol=1e-12)
        value = -(2.0 ** -ell) * res.value
        method = "quadrature"
    return PhiEval(ell=ell, z=z, value=value, method=method)


def c_ell(ell: int, m_star: float) -> float:
    """Correction constant making |phi_ell(z)| <= C_ell g_ell(z) for z > 1+m*.

    g_ell(z) = 2^{-ell} Int (1-y^2)^ell dy / z^{ell+1}; the constant is pinned
    by tangency at z = 1+m*, so C_ell g_ell(1+m*) = |phi_ell(1+m*)| exactly.
    C_1 ~ 2.74 and C_3 ~ 6.07.
    """
    ell = _require_odd_sector(ell)
    if not (0.0 < m_star < 1.0):
        raise DomainError(f"m_star must be the critical mass in (0, 1), got {m_star}")
    z0 = 1.0 + m_star
    numer = integrate_finite(lambda y: -legendre_p(ell, y) / (y + z0), -1.0, 1.0,
                             tol=1e-12)
    denom = integrate_finite(lambda y: (1.0 - y * y) ** ell, -1.0, 1.0, tol=1e-12)
    return 2.0 ** ell * z0 ** (ell + 1) * numer.value / denom.value


def theta(lam: float, r, params: MassParams):
    """The weight theta_lambda(r) = sqrt(sqrt(nu r^2 + lambda) - sqrt(lambda)).

    Evaluated as sqrt(nu r^2 / (sqrt(nu r^2 + lambda) + sqrt(lambda))), which
    avoids subtracting nearly equal square roots near r = 0 (where
    theta ~ r sqrt(nu/2/sqrt(lambda))).
    """
    if lam <= 0.0:
        raise DomainError(f"theta requires lambda > 0, got {lam}")
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError("theta requires r >= 0")
    nu_r2 = params.nu * arr * arr
    val = np.sqrt(nu_r2 / (np.sqrt(nu_r2 + lam) + math.sqrt(lam)))
    return val if arr.shape else float(val)
