"""One-dimensional quadrature on finite and semi-infinite intervals.

Everything downstream (threshold roots, sector kernels, witness residuals)
integrates through this module: adaptive quadrature for one-off integrals and
fixed Gauss grids transplanted to (0, inf) for Nystrom discretizations.

The semi-infinite compactification is the rational map r = L*u/(1-u) on
u in (0,1).  The integrands appearing here decay polynomially (r^{s-3} and
similar), which this map resolves with uniform node density in u; exponential
maps would waste nodes on the tail.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import AccuracyError, ConfigError, DomainError

# One QUADPACK subdivision costs 21 integrand evaluations (10-21 Gauss-Kronrod
# pair); the budget below caps any single adaptive call at ~1e6 evaluations.
_EVAL_BUDGET = 1_000_000
_QUAD_LIMIT = _EVAL_BUDGET // 21

#: Mapping tags accepted by :func:`gauss_grid`.
RATIONAL_MAP = "rational"


@dataclass(frozen=True)
class QuadResult:
    """Value of an integral together with its error estimate and cost."""

    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class RadialGrid:
    """Quadrature nodes/weights on (0, inf) plus the map that produced them.

    ``sum(weights * g(nodes))`` approximates ``Int_0^inf g(r) dr`` for
    integrands that decay at least polynomially.
    """

    nodes: np.ndarray
    weights: np.ndarray
    mapping: str
    scale: float
    size: int

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or weights.shape != nodes.shape:
            raise ConfigError("nodes and weights must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(nodes)) and np.all(nodes > 0.0)):
            raise ConfigError("grid nodes must be finite and positive")
        if not np.all(np.diff(nodes) > 0.0):
            raise ConfigError("grid nodes must be strictly increasing")
        if not np.all(weights > 0.0):
            raise ConfigError("grid weights must be positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "size", int(nodes.size))

    def refined(self, node_factor: int = 2, scale_factor: float = 1.0) -> "RadialGrid":
        """A companion grid with ``node_factor`` times the nodes and rescaled map."""
        return gauss_grid(self.size * node_factor, mapping=self.mapping,
                          scale=self.scale * scale_factor)


def integrate_finite(f: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-9) -> QuadResult:
    """Adaptive quadrature of ``f`` over [a, b].

    Subdivides until the error estimate is below ``tol * max(1, |value|)``;
    raises :class:`AccuracyError` (carrying the best estimate) if the panel
    budget is exhausted first.
    """
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise DomainError(f"invalid interval [{a}, {b}]")
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, abserr, info = quad(f, a, b, epsabs=tol, epsrel=tol,
                                   limit=_QUAD_LIMIT, full_output=True)[:3]
    result = QuadResult(float(value), float(abserr), int(info["neval"]))
    if abserr > tol * max(1.0, abs(value)) and caught:
        raise AccuracyError(
            f"adaptive quadrature did not reach tol={tol} on [{a}, {b}]: "
            f"value ~ {value}, error estimate {abserr}",
            best_estimate=result.value, error_estimate=result.error_estimate)
    return result


def integrate_semi_infinite(f: Callable[[float], float], tol: float = 1e-9,
                            scale: float = 1.0) -> QuadResult:
    """Adaptive quadrature of ``f`` over (0, inf) via the rational map."""
    if scale <= 0.0:
        raise DomainError("scale must be positive")

    def mapped(u: float) -> float:
        w = 1.0 - u
        r = scale * u / w
        fr = f(r)
        if fr == 0.0:
            return 0.0
        return fr * scale / (w * w)

    return integrate_finite(mapped, 0.0, 1.0, tol)


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    if n < 2:
        raise DomainError("need at least 2 nodes")
    return np.polynomial.legendre.leggauss(n)


def gauss_grid(n: int, mapping: str = RATIONAL_MAP, scale: float = 1.0) -> RadialGrid:
    """Gauss-Legendre rule transplanted to (0, inf).

    The default map is r = scale*u/(1-u) with u the nodes moved to (0, 1);
    weights carry the Jacobian scale/(1-u)^2.
    """
    if n < 2:
        raise DomainError("need at least 2 nodes")
    if mapping != RATIONAL_MAP:
        raise ConfigError(f"unknown mapping tag {mapping!r}")
    if scale <= 0.0:
        raise ConfigError("map scale must be positive")
    x, w = gauss_legendre(n)
    u = 0.5 * (x + 1.0)
    one_minus = 0.5 * (1.0 - x)
    nodes = scale * u / one_minus
    weights = w * 0.5 * scale / one_minus**2
    return RadialGrid(nodes=nodes, weights=weights, mapping=mapping,
                      scale=scale, size=n)


def panel_grid(breakpoints: np.ndarray, per_panel: int = 40) -> RadialGrid:
    """Composite Gauss rule on consecutive intervals between ``breakpoints``.

    Used where a profile lives on a union of narrow intervals that a global
    grid cannot resolve (witness charges).  Gaps are simply panels too.
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    if breakpoints.ndim != 1 or breakpoints.size < 2 or np.any(np.diff(breakpoints) <= 0):
        raise ConfigError("breakpoints must be strictly increasing")
    x, w = gauss_legendre(per_panel)
    nodes, weights = [], []
    for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(half * x + 0.5 * (hi + lo))
        weights.append(half * w)
    return RadialGrid(nodes=np.concatenate(nodes), weights=np.concatenate(weights),
                      mapping="panels", scale=1.0, size=per_panel * (breakpoints.size - 1))
