"""Spectral features of the 2+1 fermionic trimer with zero-range interaction.

Critical mass thresholds, Schur-test absence certificates, the discrete
charge-operator eigenproblem with its bound-state energies, and the
singular-sequence witness for the essential spectrum.
"""

__version__ = "0.1.0"

from .certificates import (Certificate, absence_threshold, certify_ell1,
                           certify_ell3, numeric_kernel_norm)
from .charge_operator import (ChargeProfile, SectorKernel, kernel_k,
                              mellin_symbol, phi_form, psi_form, sigma_symbol,
                              t_expectation, w_form)
from .errors import (AccuracyError, BracketError, ConfigError, DomainError,
                     InputError, SectorError, ShapeError, TrimerError)
from .masses import (MassParams, critical_mass_double_star, critical_mass_star,
                     efimov_lambda, mass_of_s, mass_params)
from .quadrature import (QuadResult, RadialGrid, gauss_grid, gauss_legendre,
                         integrate_finite, integrate_semi_infinite, panel_grid)
from .solver import (BoundState, DiscretizedOperator, SectorEigenpair,
                     SpectralWindow, WitnessPoint, assemble_t1, bound_states,
                     existence_threshold, monotonicity_sweep, sector_spectrum,
                     spectral_window, variational_quotient, witness_sequence)
from .special import PhiEval, c_ell, legendre_p, phi_ell, phi_values, theta

__all__ = [
    "__version__",
    # masses
    "MassParams", "mass_params", "efimov_lambda", "critical_mass_star",
    "mass_of_s", "critical_mass_double_star",
    # special functions
    "PhiEval", "legendre_p", "phi_ell", "phi_values", "c_ell", "theta",
    # quadrature
    "QuadResult", "RadialGrid", "integrate_finite", "integrate_semi_infinite",
    "gauss_grid", "gauss_legendre", "panel_grid",
    # charge operator
    "ChargeProfile", "SectorKernel", "phi_form", "psi_form", "t_expectation",
    "kernel_k", "mellin_symbol", "sigma_symbol", "w_form",
    # certificates
    "Certificate", "certify_ell1", "certify_ell3", "absence_threshold",
    "numeric_kernel_norm",
    # solver
    "DiscretizedOperator", "SpectralWindow", "BoundState", "SectorEigenpair",
    "WitnessPoint", "assemble_t1", "sector_spectrum", "bound_states",
    "variational_quotient", "existence_threshold", "monotonicity_sweep",
    "spectral_window", "witness_sequence",
    # errors
    "TrimerError", "DomainError", "SectorError", "ShapeError", "ConfigError",
    "InputError", "BracketError", "AccuracyError",
]
