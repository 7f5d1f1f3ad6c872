"""The Ter-Martirosyan-Skornyakov eigenproblem and its spectral by-products.

Bound states of the trimer at coupling alpha < 0 correspond one-to-one to
eigenvalues eps < 2 pi^2 of the shifted charge operator T_1 on an odd
angular sector (in fact only ell = 1 carries any), through the scaling

    E = -alpha^2 / eps^2.

T_1 restricted to a sector is a one-dimensional operator on L^2(r^2 dr):
diagonal multiplication by 2 pi^2 sqrt(nu r^2 + 1) plus the phi_ell integral
kernel.  Discretised by a symmetrised Nystrom rule it becomes a dense
symmetric matrix whose low eigenvalues converge to the true ones; the
essential spectrum [2 pi^2, inf) also leaves discretisation debris, so an
eigenvalue below 2 pi^2 counts as a bound-state candidate only after it
persists under grid doubling and under doubling the map scale (true
eigenvalues drift by ~1e-7 relative; spurious tail modes scale with the
largest node and drift by factors).

The module also carries the variational existence threshold (a rank-one
Rayleigh quotient with an explicit trial charge), the spectral window that
must contain every discrete eigenvalue, mass-monotonicity sweeps, and the
singular-sequence witness certifying the bottom of the essential spectrum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charge_operator import ChargeProfile, TWO_PI_SQ, w_form
from .errors import DomainError, InputError, SectorError
from .masses import MassParams, critical_mass_star, efimov_lambda, mass_params
from .quadrature import RadialGrid, gauss_grid, integrate_finite, panel_grid
from .roots import find_root
from .special import _phi1_scalar, phi_values

#: Candidates must sit below 2 pi^2 by at least this relative margin.
BELOW_THRESHOLD_MARGIN = 1e-8
#: Maximum relative drift under refinement for a candidate to count as converged.
CONVERGENCE_DRIFT = 1e-4

DEFAULT_GRID_SIZE = 400
DEFAULT_MAP_SCALE = 1.0
DEFAULT_TRIAL = {"a": 1.2, "b": 0.05}
DEFAULT_WITNESS_INDICES = (8, 16, 32, 64)


@dataclass(frozen=True)
class DiscretizedOperator:
    """Symmetrised Nystrom matrix of T_1 on one odd sector."""

    sector: int
    params: MassParams
    grid: RadialGrid
    matrix: np.ndarray
    lambda_shift: float = 1.0


@dataclass(frozen=True)
class SpectralWindow:
    """Location of the essential spectrum and the discrete window.

    For alpha >= 0 the discrete window is empty (lower is None) and the
    essential spectrum is [0, inf); for alpha < 0 it is [-alpha^2/4pi^4, inf)
    with every discrete eigenvalue inside [lower, upper).
    """

    m: float
    alpha: float
    ess_bottom: float
    lower: float | None
    upper: float | None

    @property
    def empty(self) -> bool:
        return self.lower is None

    def contains(self, energy: float) -> bool:
        if self.empty:
            return False
        return self.lower <= energy < self.upper


@dataclass(frozen=True)
class SectorEigenpair:
    """One discrete eigenvalue of the Nystrom operator with its profile."""

    epsilon: float
    vector: np.ndarray  # profile samples f(r_i) on the operator's grid
    candidate: bool     # below 2 pi^2 and survived the refinement gate


@dataclass(frozen=True)
class BoundState:
    """One trimer bound state recovered from a charge-operator eigenvalue."""

    energy: float
    epsilon: float
    charge: ChargeProfile
    residual: float


def assemble_t1(ell: int, params: MassParams, grid: RadialGrid) -> DiscretizedOperator:
    """Symmetrised Nystrom matrix of T_1 on an odd sector.

    M_ij = delta_ij 2 pi^2 sqrt(nu r_i^2 + 1)
           + 2 pi sqrt(w_i) r_i sqrt(w_j) r_j phi_ell(z_ij)/(mu r_i r_j),
    z_ij = (r_i^2 + r_j^2 + 1)/(mu r_i r_j).  Acting on v_i = sqrt(w_i) r_i f_i
    it reproduces the quadratic form Phi_1[f] + Psi_{1,ell}[f].
    """
    if ell % 2 == 0 or ell < 1:
        raise SectorError(
            f"even sectors carry no bound states and are not assembled, got ell={ell}")
    r, w = grid.nodes, grid.weights
    rr = np.outer(r, r)
    z = (r[:, None] ** 2 + r[None, :] ** 2 + 1.0) / (params.mu * rr)
    kernel = phi_values(ell, z) / (params.mu * rr)
    sq = np.sqrt(w) * r
    matrix = 2.0 * math.pi * np.outer(sq, sq) * kernel
    matrix[np.diag_indices_from(matrix)] += TWO_PI_SQ * np.sqrt(params.nu * r * r + 1.0)
    matrix = 0.5 * (matrix + matrix.T)
    return DiscretizedOperator(sector=int(ell), params=params, grid=grid, matrix=matrix)


def _below_threshold(eigenvalues: np.ndarray) -> np.ndarray:
    return eigenvalues[eigenvalues < TWO_PI_SQ * (1.0 - BELOW_THRESHOLD_MARGIN)]


def _passes_gate(eps: float, refined_spectra: list[np.ndarray]) -> bool:
    for spectrum in refined_spectra:
        nearest = spectrum[np.argmin(np.abs(spectrum - eps))]
        if abs(nearest - eps) > CONVERGENCE_DRIFT * abs(eps):
            return False
        if nearest >= TWO_PI_SQ * (1.0 - BELOW_THRESHOLD_MARGIN):
            return False
    return True


def sector_spectrum(op: DiscretizedOperator, count: int) -> list[SectorEigenpair]:
    """The ``count`` smallest eigenvalues with eigenvectors (dense solve).

    Eigenvalues strictly below 2 pi^2 are marked as bound-state candidates
    only if they persist (relative drift below 1e-4, still below threshold)
    in both the grid-doubled and the map-scale-doubled assemblies.
    """
    if count < 1:
        raise InputError("count must be at least 1")
    eigenvalues, vectors = np.linalg.eigh(op.matrix)
    refined_spectra: list[np.ndarray] = []
    if _below_threshold(eigenvalues[:count]).size:
        for node_factor, scale_factor in ((2, 1.0), (1, 2.0)):
            refined = assemble_t1(op.sector, op.params,
                                  op.grid.refined(node_factor, scale_factor))
            refined_spectra.append(np.linalg.eigvalsh(refined.matrix))
    sq = np.sqrt(op.grid.weights) * op.grid.nodes
    out = []
    for k in range(min(count, eigenvalues.size)):
        eps = float(eigenvalues[k])
        below = eps < TWO_PI_SQ * (1.0 - BELOW_THRESHOLD_MARGIN)
        candidate = below and _passes_gate(eps, refined_spectra)
        profile = vectors[:, k] / sq  # back from symmetrised to f(r_i) samples
        out.append(SectorEigenpair(epsilon=eps, vector=profile, candidate=candidate))
    return out


def spectral_window(m: float, alpha: float) -> SpectralWindow:
    """Essential spectrum bottom and the window confining discrete eigenvalues."""
    p = mass_params(m)
    if p.m <= critical_mass_star():
        raise DomainError("spectral windows are defined above the stability threshold")
    if alpha >= 0.0:
        return SpectralWindow(m=p.m, alpha=float(alpha), ess_bottom=0.0,
                              lower=None, upper=None)
    lam = efimov_lambda(p.m)
    upper = -alpha * alpha / (4.0 * math.pi ** 4)
    lower = upper / (1.0 - lam * lam)
    return SpectralWindow(m=p.m, alpha=float(alpha), ess_bottom=upper,
                          lower=lower, upper=upper)


def bound_states(m: float, alpha: float, ell: int = 1,
                 grid: RadialGrid | None = None, count: int = 6) -> list[BoundState]:
    """Bound states at coupling alpha: energies, charges, residuals.

    Empty for alpha >= 0 (the discrete spectrum is empty there).  Each
    converged eps < 2 pi^2 yields E = -alpha^2/eps^2; the charge profile is
    rescaled to the physical shift -E and normalised in the W-form norm (the
    L^2 norm of the trimer wave function it generates).
    """
    if alpha >= 0.0:
        return []
    p = mass_params(m)
    if p.m <= critical_mass_star():
        raise DomainError("bound-state search requires m above the stability threshold")
    if grid is None:
        grid = gauss_grid(DEFAULT_GRID_SIZE, scale=DEFAULT_MAP_SCALE)
    op = assemble_t1(ell, p, grid)
    window = spectral_window(p.m, alpha)
    states = []
    for pair in sector_spectrum(op, count):
        if not pair.candidate:
            continue
        eps = pair.epsilon
        energy = -alpha * alpha / (eps * eps)
        lam_shift = alpha * alpha / (eps * eps)
        # Window membership, with a one-sided slack at the lower edge: the
        # discretised eps may graze the form bound from below by rounding.
        if not (window.lower * (1.0 + 1e-9) <= energy < window.upper):
            raise DomainError(
                f"computed energy {energy} escaped the spectral window "
                f"[{window.lower}, {window.upper}); discretisation too coarse")
        scale = math.sqrt(lam_shift)
        physical_grid = gauss_grid(grid.size, mapping=grid.mapping,
                                   scale=grid.scale * scale)
        charge = ChargeProfile(ell=ell, grid=physical_grid, values=pair.vector)
        norm = w_form(lam_shift, ell, p, charge, charge)
        charge = ChargeProfile(ell=ell, grid=physical_grid,
                               values=pair.vector / math.sqrt(norm))
        sq = np.sqrt(grid.weights) * grid.nodes
        v = sq * pair.vector
        residual = float(np.linalg.norm(op.matrix @ v - eps * v) / np.linalg.norm(v))
        states.append(BoundState(energy=energy, epsilon=eps, charge=charge,
                                 residual=residual))
    return states


def _trial_values(trial: dict, r: np.ndarray) -> np.ndarray:
    a, b = float(trial["a"]), float(trial["b"])
    if a <= 1.0 or b <= 0.0:
        raise DomainError(f"trial charge needs a > 1 and b > 0, got a={a}, b={b}")
    return np.exp(-b * r * r) / (r * np.log(r + a))


def variational_quotient(m: float, trial: dict = DEFAULT_TRIAL,
                         n: int = 800) -> float:
    """Rayleigh quotient of T_1 on the explicit sector-1 trial charge.

    f(r) = exp(-b r^2) / (r log(r+a)); the quotient is strictly increasing in
    the mass, and its crossing of 2 pi^2 locates the variational existence
    threshold.  Always an upper bound on the bottom of the sector spectrum.
    """
    p = mass_params(m)
    grid = gauss_grid(n, scale=DEFAULT_MAP_SCALE)
    r, w = grid.nodes, grid.weights
    f = _trial_values(trial, r)
    phi_part = TWO_PI_SQ * np.sum(w * r * r * np.sqrt(p.nu * r * r + 1.0) * f * f)
    z = (r[:, None] ** 2 + r[None, :] ** 2 + 1.0) / (p.mu * np.outer(r, r))
    vec = w * r * f
    psi_part = (2.0 * math.pi / p.mu) * vec @ phi_values(1, z) @ vec
    norm_sq = np.sum(w * r * r * f * f)
    return float((phi_part + psi_part) / norm_sq)


def existence_threshold(trial: dict = DEFAULT_TRIAL, tol: float = 1e-10) -> float:
    """Mass at which the trial Rayleigh quotient crosses 2 pi^2.

    Below this mass the quotient certifies an eigenvalue under the essential
    spectrum; monotonicity in m makes the root unique.  With the default
    trial, 1/root is approximately 8.587.
    """
    return find_root(lambda m: variational_quotient(m, trial) - TWO_PI_SQ,
                     0.08, 0.30, tol=tol)


def monotonicity_sweep(mass_grid, ell: int = 1,
                       grid: RadialGrid | None = None) -> list[tuple[float, float]]:
    """Lowest persistent eigenvalue eps_min per mass, for increasing masses.

    Spurious tail modes are discarded by requiring each value to reappear
    (within the convergence drift) in a map-scale-doubled assembly.  The
    returned eps_min(m) must be strictly increasing for true eigenvalues.
    """
    masses = np.asarray(mass_grid, dtype=float)
    if masses.ndim != 1 or masses.size == 0:
        raise InputError("mass grid must be a non-empty 1-d array")
    if masses.size > 1 and np.any(np.diff(masses) <= 0.0):
        raise InputError("mass grid must be strictly increasing")
    if np.min(masses) <= critical_mass_star():
        raise DomainError("sweep masses must lie above the stability threshold")
    if grid is None:
        grid = gauss_grid(DEFAULT_GRID_SIZE, scale=DEFAULT_MAP_SCALE)
    alt_grid = grid.refined(1, 2.0)
    out = []
    for m in masses:
        p = mass_params(float(m))
        base = np.linalg.eigvalsh(assemble_t1(ell, p, grid).matrix)
        alt = np.linalg.eigvalsh(assemble_t1(ell, p, alt_grid).matrix)
        eps_min = None
        for eps in base:
            nearest = alt[np.argmin(np.abs(alt - eps))]
            if abs(nearest - eps) <= CONVERGENCE_DRIFT * abs(eps):
                eps_min = float(eps)
                break
        if eps_min is None:  # everything spurious: fall back to the raw minimum
            eps_min = float(base[0])
        out.append((float(m), eps_min))
    return out


@dataclass(frozen=True)
class WitnessPoint:
    """One member of the singular-sequence witness table."""

    n: int
    residual_norm: float
    gram_offdiag: float  # with the next index; nan on the last row
    hminus_half_norm_sq: float


def _witness_radius(alpha: float, lam: float, nu: float) -> float:
    # root of 2 pi^2 sqrt(nu r0^2 + lam) = |alpha|
    return math.sqrt((alpha * alpha / (4.0 * math.pi ** 4) - lam) / nu)


def _witness_inner(r: float, n: int, r0: float, lam: float, p: MassParams) -> float:
    # 2 pi Int r'^2 f_n(r') phi_1(z)/(mu r r') dr' over the support of f_n
    lo, hi = r0 + 1.0 / n, r0 + 2.0 / n

    def integrand(rp: float) -> float:
        z = (r * r + rp * rp + lam) / (p.mu * r * rp)
        return rp * _phi1_scalar(z) / (p.mu * r * rp)

    res = integrate_finite(integrand, lo, hi, tol=1e-11)
    return 2.0 * math.pi * math.sqrt(n) * res.value


def _witness_residual(n: int, r0: float, alpha: float, lam: float,
                      p: MassParams) -> float:
    lo, hi = r0 + 1.0 / n, r0 + 2.0 / n
    abs_alpha = abs(alpha)

    def on_support(r: float) -> float:
        f = math.sqrt(n) / r
        total = (TWO_PI_SQ * math.sqrt(p.nu * r * r + lam) - abs_alpha) * f \
            + _witness_inner(r, n, r0, lam, p)
        return r * r * math.sqrt(r * r + 1.0) * total * total

    def off_support(r: float) -> float:
        h = _witness_inner(r, n, r0, lam, p)
        return r * r * math.sqrt(r * r + 1.0) * h * h

    # The support shrinks like 1/n; integrate it and its complement separately
    # so the quadrature always resolves the charge.
    cut = max(10.0, r0 + 5.0)
    total = integrate_finite(on_support, lo, hi, tol=1e-10).value
    total += integrate_finite(off_support, 1e-12, lo, tol=1e-8).value
    total += integrate_finite(off_support, hi, cut, tol=1e-8).value
    total += integrate_finite(
        lambda u: off_support(cut / (1.0 - u)) * cut / (1.0 - u) ** 2,
        0.0, 1.0 - 1e-12, tol=1e-8).value
    return math.sqrt(total)


def _witness_gram(n: int, n_next: int, r0: float, lam: float,
                  p: MassParams) -> float:
    # W form of two disjoint-support charges on a dedicated two-panel grid;
    # the diagonal term vanishes because the supports never overlap.  For
    # consecutive doubling indices the supports share an endpoint, hence the
    # dedupe.
    panels = sorted({r0 + 1.0 / n, r0 + 2.0 / n, r0 + 1.0 / n_next, r0 + 2.0 / n_next})
    grid = panel_grid(np.asarray(panels), per_panel=48)
    r = grid.nodes

    def charge(index: int) -> ChargeProfile:
        lo, hi = r0 + 1.0 / index, r0 + 2.0 / index
        vals = np.where((r >= lo) & (r <= hi), math.sqrt(index) / r, 0.0)
        return ChargeProfile(ell=1, grid=grid, values=vals)

    return w_form(lam, 1, p, charge(n), charge(n_next))


def witness_sequence(m: float, alpha: float, lam: float,
                     indices=DEFAULT_WITNESS_INDICES) -> list[WitnessPoint]:
    """Singular-sequence witness for the bottom of the essential spectrum.

    Builds the shell charges f_n(r) = sqrt(n)/r on [r0+1/n, r0+2/n], where
    2 pi^2 sqrt(nu r0^2 + lambda) = |alpha|, and reports per index the
    shifted-operator residual norm, the W-form Gram entry with the next
    index, and the squared H^{-1/2} norm (whose limit is (r0^2+1)^{-1/2}).
    Residuals and Gram entries must decay along the sequence.
    """
    if alpha >= 0.0:
        raise DomainError("the witness needs an attractive coupling alpha < 0")
    p = mass_params(m)
    cap = alpha * alpha / (4.0 * math.pi ** 4)
    if not (0.0 < lam <= cap):
        raise DomainError(f"lambda must lie in (0, alpha^2/(4 pi^4)] = (0, {cap}], "
                          f"got {lam}")
    idx = [int(n) for n in indices]
    if len(idx) == 0 or any(n < 1 for n in idx):
        raise DomainError("indices must be positive integers")
    if any(b < 2 * a for a, b in zip(idx, idx[1:])):
        raise DomainError("indices must at least double at each step so the "
                          "charge supports stay pairwise disjoint")
    r0 = _witness_radius(alpha, lam, p.nu)
    out = []
    for i, n in enumerate(idx):
        residual = _witness_residual(n, r0, alpha, lam, p)
        gram = _witness_gram(n, idx[i + 1], r0, lam, p) if i + 1 < len(idx) else math.nan
        hnorm = integrate_finite(lambda r: n / math.sqrt(r * r + 1.0),
                                 r0 + 1.0 / n, r0 + 2.0 / n, tol=1e-12).value
        out.append(WitnessPoint(n=n, residual_norm=residual, gram_offdiag=gram,
                                hminus_half_norm_sq=hnorm))
    return out
