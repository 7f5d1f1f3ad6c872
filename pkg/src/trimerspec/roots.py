"""Bracketed root finding.

All threshold computations in this package are roots of continuous, monotone
functions on a known interval, so the policy is: verify that the bracket
straddles the root, then run Brent's bisection/secant/inverse-quadratic
hybrid.  A non-straddling bracket means an ingredient is broken (a miscoded
transcendental, not bad user input), hence BracketError rather than a domain
error.  Never an unbracketed Newton step.
"""
from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, DomainError


def find_root(f: Callable[[float], float], a: float, b: float,
              tol: float = 1e-10) -> float:
    """Root of ``f`` on [a, b]; the bracket must straddle (f(a)*f(b) < 0)."""
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    fa, fb = f(a), f(b)
    if not (np.isfinite(fa) and np.isfinite(fb)):
        raise BracketError(f"bracket endpoints not finite: f({a})={fa}, f({b})={fb}")
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        # Interval-halving fallback: scan for a sign change before giving up.
        grid = np.linspace(a, b, 65)
        vals = np.array([f(x) for x in grid])
        sign_change = np.nonzero(vals[:-1] * vals[1:] < 0.0)[0]
        if sign_change.size == 0:
            raise BracketError(
                f"no sign change of target function on [{a}, {b}]: "
                f"f({a})={fa}, f({b})={fb}")
        i = sign_change[0]
        a, b = grid[i], grid[i + 1]
    return float(brentq(f, a, b, xtol=tol, rtol=4.0 * np.finfo(float).eps))
