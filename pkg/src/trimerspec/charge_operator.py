"""Radial sector reductions of the charge operator and its companion forms.

A charge with definite angular momentum ell is represented by the radial
samples of its profile f(r).  On such a profile the charge operator's
expectation splits into a diagonal part and a sector kernel part,

    Phi_lambda[f]      = 2 pi^2 Int r^2 sqrt(nu r^2 + lambda) |f|^2 dr,
    Psi_{lambda,ell}[f] = 2 pi  Int Int r^2 f(r) r'^2 f(r')
                          [ Int P_ell(y) / (r^2 + r'^2 + mu r r' y + lambda) dy ] dr dr',

and for odd ell the inner y-integral collapses to phi_ell(z)/(mu r r') with
z = (r^2 + r'^2 + lambda)/(mu r r').  Everything else in the module (the
lambda = 1 sector kernel K_ell, the Mellin symbols, the sigma symbols, the
W form of the two-body overlaps) is a reweighting of the same three
ingredients: the diagonal square root, phi_ell, and the Legendre y-moments.

Double integrals are Nystrom double sums on the profile's grid; y-integrals
for odd ell always route through phi_ell (one quadrature dimension fewer).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SectorError, ShapeError
from .masses import MassParams
from .quadrature import RadialGrid, integrate_finite
from .special import legendre_p, phi_values, theta

TWO_PI_SQ = 2.0 * math.pi ** 2


@dataclass(frozen=True)
class ChargeProfile:
    """Radial samples f(r_i) of one angular sector of a charge."""

    ell: int
    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        if self.ell < 0 or self.ell != int(self.ell):
            raise SectorError(f"sector must be a non-negative integer, got {self.ell}")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.nodes.shape:
            raise ShapeError("profile values must match the grid size")
        if not np.all(np.isfinite(vals)):
            raise ShapeError("profile values must be finite")
        object.__setattr__(self, "values", vals)

    def norm_sq(self) -> float:
        """L^2(r^2 dr) squared norm by grid summation."""
        r, w = self.grid.nodes, self.grid.weights
        return float(np.sum(w * r * r * self.values ** 2))


def _require_same_frame(f: ChargeProfile, g: ChargeProfile) -> None:
    if f.ell != g.ell:
        raise ShapeError(f"sector mismatch: {f.ell} vs {g.ell}")
    if f.grid.size != g.grid.size or not np.array_equal(f.grid.nodes, g.grid.nodes):
        raise ShapeError("profiles must share the same grid")


def _pochhammer(p: int, ell: int) -> float:
    out = 1.0
    for k in range(ell):
        out *= p + k
    return out


def _angular_moment(ell: int, d: np.ndarray, c: np.ndarray, power: int) -> np.ndarray:
    """Int_{-1}^{1} P_ell(y) (d + c y)^{-power} dy, vectorised over d, c.

    Integrating P_ell by parts ell times gives the single-signed form
    (-1)^ell (power)_ell c^ell / (2^ell ell!) Int (1-y^2)^ell (d+cy)^{-power-ell} dy,
    which is stable at every argument (no cancellation); the plain form loses
    all digits once d/c is large.
    """
    from .special import _gl  # shared cached Gauss rules

    y, w = _gl(240)
    acc = np.zeros_like(d)
    for yk, wk in zip(y, w):
        acc += wk * (1.0 - yk * yk) ** ell / (d + c * yk) ** (power + ell)
    sign = -1.0 if ell % 2 else 1.0
    return sign * _pochhammer(power, ell) * c ** ell / (2.0 ** ell * math.factorial(ell)) * acc


def phi_form(lam: float, params: MassParams, f: ChargeProfile) -> float:
    """Diagonal form Phi_lambda[f] = 2 pi^2 Int r^2 sqrt(nu r^2+lambda) f^2 dr."""
    if lam < 0.0:
        raise DomainError("phi_form requires lambda >= 0")
    r, w = f.grid.nodes, f.grid.weights
    return float(TWO_PI_SQ * np.sum(
        w * r * r * np.sqrt(params.nu * r * r + lam) * f.values ** 2))


def psi_form(lam: float, ell: int, params: MassParams, f: ChargeProfile) -> float:
    """Off-diagonal form Psi_{lambda,ell}[f] as a Nystrom double sum.

    Odd ell routes the inner y-integral through phi_ell; even ell evaluates
    it by quadrature (it has no closed form and no sign problem there).
    """
    if lam < 0.0:
        raise DomainError("psi_form requires lambda >= 0")
    if ell != f.ell:
        raise ShapeError(f"profile carries sector {f.ell}, asked for {ell}")
    r, w = f.grid.nodes, f.grid.weights
    rr = np.outer(r, r)
    d = r[:, None] ** 2 + r[None, :] ** 2 + lam
    c = params.mu * rr
    if ell % 2 == 1:
        kernel = phi_values(ell, d / c) / c
    else:
        kernel = _angular_moment(ell, d, c, power=1)
    vec = w * r * r * f.values
    return float(2.0 * math.pi * vec @ kernel @ vec)


def t_expectation(lam: float, params: MassParams, f: ChargeProfile) -> float:
    """Expectation of the charge operator on the profile's sector."""
    return phi_form(lam, params, f) + psi_form(lam, f.ell, params, f)


def kernel_k(ell: int, params: MassParams, r, r_prime):
    """The lambda = 1 sector kernel K_ell(r, r') on L^2(r^2 dr).

    K_ell(r,r') = phi_ell((r^2+r'^2+1)/(mu r r')) / (pi mu r r' theta_1(r) theta_1(r')).
    Finite as either radius tends to 0: phi_ell supplies (r r')^{ell+1} decay
    through its asymptotic branch while theta_1 ~ r sqrt(nu/2) is evaluated in
    its cancellation-safe form, so no 0/0 is ever formed.
    """
    if ell % 2 == 0 or ell < 1:
        raise SectorError(f"kernel defined for odd sectors, got ell={ell}")
    ra = np.asarray(r, dtype=float)
    rb = np.asarray(r_prime, dtype=float)
    if np.any(ra <= 0.0) or np.any(rb <= 0.0):
        raise DomainError("kernel radii must be positive")
    z = (ra ** 2 + rb ** 2 + 1.0) / (params.mu * ra * rb)
    val = phi_values(ell, z) / (
        math.pi * params.mu * ra * rb * theta(1.0, ra, params) * theta(1.0, rb, params))
    return val if val.shape else float(val)


@dataclass(frozen=True)
class SectorKernel:
    """K_ell at fixed lambda = 1 for one mass, callable as k(r, r')."""

    ell: int
    lam: float
    params: MassParams

    def __post_init__(self):
        if self.lam != 1.0:
            raise DomainError("the sector kernel is defined at lambda = 1")

    def __call__(self, r, r_prime):
        return kernel_k(self.ell, self.params, r, r_prime)

    def matrix(self, grid: RadialGrid) -> np.ndarray:
        """Dense kernel values K(r_i, r_j) on a grid (no quadrature weights)."""
        return kernel_k(self.ell, self.params, grid.nodes[:, None], grid.nodes[None, :])


def _hyperbolic_ratio(numerator_arg: float, k: float, odd: bool) -> float:
    # sinh(k a)/sinh(k pi/2) for odd symbols, cosh(k a)/cosh(k pi/2) for even,
    # with the k = 0 limit 2a/pi for the odd case and overflow-safe form for
    # large |k| (both hyperbolics grow like exp(|k| pi/2)).
    a = numerator_arg
    k = abs(k)
    if odd and k == 0.0:
        return 2.0 * a / math.pi
    if k * math.pi / 2.0 < 350.0:
        if odd:
            return math.sinh(k * a) / math.sinh(k * math.pi / 2.0)
        return math.cosh(k * a) / math.cosh(k * math.pi / 2.0)
    sa = 1.0 if a >= 0 else -1.0
    expo = math.exp(k * (abs(a) - math.pi / 2.0))
    if odd:
        return sa * expo * (1.0 - math.exp(-2.0 * k * abs(a))) / (1.0 - math.exp(-k * math.pi))
    return expo * (1.0 + math.exp(-2.0 * k * abs(a))) / (1.0 + math.exp(-k * math.pi))


def mellin_symbol(ell: int, rho: float, params: MassParams) -> float:
    """Mellin multiplier of the homogeneous sector kernel; even in rho.

    Even sectors use the cosh ratio and are positive with the maximum at
    rho = 0; odd sectors use the sinh ratio, are negative, and increase
    toward 0 away from rho = 0.
    """
    if ell < 0 or ell != int(ell):
        raise SectorError(f"sector must be a non-negative integer, got {ell}")
    odd = ell % 2 == 1
    minv = params.m + 1.0

    def integrand(x: float) -> float:
        a = math.asin(x / minv)
        return legendre_p(ell, x) * _hyperbolic_ratio(a, rho, odd) / math.cos(a)

    res = integrate_finite(integrand, 0.0, 1.0, tol=1e-11)
    return (-TWO_PI_SQ if odd else TWO_PI_SQ) * res.value


def sigma_symbol(ell: int, k: float, params: MassParams) -> float:
    """The positive even symbol sigma_ell(k) of the lambda = 0 odd-sector form.

    At k = 0 the removable singularity sinh(k a)/sinh(k pi/2) -> 2a/pi is
    substituted.
    """
    if ell % 2 == 0 or ell < 1:
        raise SectorError(f"sigma is defined for odd sectors, got ell={ell}")
    minv = params.m + 1.0

    def integrand(y: float) -> float:
        a = math.asin(y / minv)
        return legendre_p(ell, y) * _hyperbolic_ratio(a, k, odd=True) / math.cos(a)

    res = integrate_finite(integrand, -1.0, 1.0, tol=1e-11)
    return 0.5 * res.value


def w_form(lam: float, ell: int, params: MassParams, f: ChargeProfile,
           g: ChargeProfile) -> float:
    """Sector reduction of the two-body overlap <u_f, u_g>.

    2 pi^2 Int r^2 f g / sqrt(nu r^2 + lambda) dr
      - 2 * 2 pi Int Int r^2 f(r) r'^2 g(r')
            [ Int P_ell(y)/(r^2+r'^2+mu r r' y+lambda)^2 dy ] dr dr'.

    Positive definite; defines the physical norm of the trimer wave function
    attached to a charge.
    """
    if lam <= 0.0:
        raise DomainError("w_form requires lambda > 0")
    _require_same_frame(f, g)
    if ell != f.ell:
        raise ShapeError(f"profiles carry sector {f.ell}, asked for {ell}")
    r, w = f.grid.nodes, f.grid.weights
    diag = TWO_PI_SQ * np.sum(
        w * r * r * f.values * g.values / np.sqrt(params.nu * r * r + lam))
    d = r[:, None] ** 2 + r[None, :] ** 2 + lam
    c = params.mu * np.outer(r, r)
    moment = _angular_moment(ell, d, c, power=2)
    vf = w * r * r * f.values
    vg = w * r * r * g.values
    return float(diag - 4.0 * math.pi * vf @ moment @ vg)
