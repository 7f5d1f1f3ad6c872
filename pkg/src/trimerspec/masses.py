"""Mass-dependent constants and the critical mass thresholds.

The mass ratio m (third particle over fermion) enters every kernel only
through the pair

    mu = 2/(m+1),        nu = m(m+2)/(m+1)^2 = 1 - mu^2/4,

and the stability landscape is organised by the Efimov transcendental
function

    Lambda(m) = (2/pi) (m+1)^2 (1/sqrt(m(m+2)) - arcsin(1/(m+1))),

which is positive and strictly decreasing.  Its unique unit root m* is the
stability threshold; a second family of thresholds m(s), s in [0, 1], comes
from a one-parameter integral equation whose s = 1 member defines m**.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import integrate_semi_infinite
from .roots import find_root

#: Fixed bracket for the Lambda(m) = 1 root; Lambda spans (0, inf) on it.
_MSTAR_BRACKET = (1e-4, 1.0)
#: Fixed bracket for the m(s) roots; the target is increasing in m on it.
_MS_BRACKET = (1e-3, 1.0)


@dataclass(frozen=True)
class MassParams:
    """The triple (m, mu, nu) that parameterises every kernel."""

    m: float
    mu: float
    nu: float


def mass_params(m: float) -> MassParams:
    """Validate m > 0 and build the derived couplings mu and nu."""
    if not (isinstance(m, (int, float)) and math.isfinite(m) and m > 0.0):
        raise DomainError(f"mass ratio must be a positive finite real, got {m!r}")
    m = float(m)
    return MassParams(m=m, mu=2.0 / (m + 1.0), nu=m * (m + 2.0) / (m + 1.0) ** 2)


def efimov_lambda(m: float) -> float:
    """The Efimov transcendental function Lambda(m); positive, decreasing."""
    p = mass_params(m)  # reuse the domain check
    m = p.m
    return (2.0 / math.pi) * (m + 1.0) ** 2 * (
        1.0 / math.sqrt(m * (m + 2.0)) - math.asin(1.0 / (m + 1.0)))


def critical_mass_star(tol: float = 1e-10) -> float:
    """The stability threshold m*: unique root of Lambda(m) = 1.

    1/m* is approximately 13.607.
    """
    return find_root(lambda m: efimov_lambda(m) - 1.0, *_MSTAR_BRACKET, tol=tol)


def _phi1(z: float) -> float:
    # Closed form of Int_{-1}^{1} y/(y+z) dy, stable up to z ~ 1e2; the series
    # branch is not needed here because the m(s) integrand keeps z moderate
    # wherever the integrand is not already negligible.
    if z > 1e2:
        acc = 0.0
        for j in range(6, -1, -1):
            acc = acc / (z * z) + 2.0 / (2 * j + 3)
        return -acc / (z * z)
    return 2.0 - z * math.log1p(2.0 / (z - 1.0))


def mass_of_s(s: float, tol: float = 1e-10) -> float:
    """Solve the implicit threshold equation for m at exponent s in [0, 1].

    The equation is pi*sqrt(nu) + Int dy y Int dr r^s/(r^2+1+mu*r*y) = 0.
    The y-integral is evaluated first, in closed form, which turns the radial
    integrand into r^s * phi1((r^2+1)/(mu r))/(mu r) = O(r^{s-3}); doing the
    r-integral first would diverge at s = 1.  m(0) recovers m* and m(1) is
    the second threshold m** ~ (8.62)^{-1}.
    """
    if not (0.0 <= s <= 1.0):
        raise DomainError(f"s must lie in [0, 1], got {s}")

    def target(m: float) -> float:
        p = mass_params(m)

        def radial(r: float) -> float:
            z = (r * r + 1.0) / (p.mu * r)
            return r ** s * _phi1(z) / (p.mu * r)

        integral = integrate_semi_infinite(radial, tol=1e-9 * 0.1)
        return math.pi * math.sqrt(p.nu) + integral.value

    return find_root(target, *_MS_BRACKET, tol=tol)


def critical_mass_double_star(tol: float = 1e-10) -> float:
    """The second threshold m** = m(1); 1/m** is approximately 8.62."""
    return mass_of_s(1.0, tol=tol)
