"""Command-line front end.

Subcommands: thresholds, certify, sweep, spectrum, witness.  Output is CSV
(RFC-4180) or pretty-printed JSON, to a file or stdout (``-``).  A JSON config
file may supply any flag (flat key/value, underscores for dashes); explicit
flags override it.  Exit codes: 0 success, 2 usage or domain error, 3
numerical failure (including a witness run whose decay checks fail).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from .certificates import absence_threshold, certify_ell1, certify_ell3
from .charge_operator import TWO_PI_SQ
from .errors import (AccuracyError, BracketError, ConfigError, DomainError,
                     InputError, SectorError, ShapeError)
from .masses import critical_mass_star, critical_mass_double_star
from .quadrature import gauss_grid
from .reports import RunConfig, SpectralReport, threshold_entry
from .solver import (assemble_t1, bound_states, existence_threshold,
                     monotonicity_sweep, sector_spectrum, spectral_window,
                     witness_sequence)

_USAGE_ERRORS = (InputError, DomainError, ConfigError, SectorError, ShapeError,
                 OSError, json.JSONDecodeError)
_NUMERIC_ERRORS = (AccuracyError, BracketError, np.linalg.LinAlgError,
                   ArithmeticError)


def cmd_thresholds(config: RunConfig) -> SpectralReport:
    """Compute the four mass thresholds with their tolerances."""
    tol = config.tol
    trial = {"a": config.trial_a, "b": config.trial_b}
    timings = {}
    report = SpectralReport(config=config.echo())

    start = time.perf_counter()
    m_star = critical_mass_star(tol)
    timings["m_star"] = time.perf_counter() - start

    start = time.perf_counter()
    m_double_star = critical_mass_double_star(tol)
    timings["m_double_star"] = time.perf_counter() - start

    start = time.perf_counter()
    m_variational = existence_threshold(trial, tol)
    timings["m_variational"] = time.perf_counter() - start

    start = time.perf_counter()
    absence = absence_threshold(tol)
    timings["absence_root"] = time.perf_counter() - start

    report.thresholds = {
        "m_star": threshold_entry(m_star, tol),
        "m_double_star": threshold_entry(m_double_star, 2.0 * tol),
        "m_variational": threshold_entry(m_variational, tol),
        "absence_root": threshold_entry(absence, tol),
    }
    report.tolerances = {"roots": tol, "quadrature_relative": 1e-9}
    report.notes = [
        "absence_root is the Schur-certificate root: an upper bound on the "
        "true absence threshold, not the threshold itself",
    ]
    if config.timings:
        report.timings = timings
    return report


def cmd_certify(config: RunConfig) -> SpectralReport:
    """Evaluate one Schur certificate with its intermediates."""
    if config.m is None:
        raise InputError("certify requires --m")
    if config.ell == 1:
        cert = certify_ell1(config.m)
    elif config.ell == 3:
        cert = certify_ell3(config.m)
    else:
        raise InputError("certificates are available for --ell 1 or 3")
    report = SpectralReport(config=config.echo())
    report.rows = [{
        "ell": cert.ell, "m": cert.m, "bound": cert.bound,
        "certifies_absence": cert.certifies_absence,
        "r_max": cert.intermediates["r_max"],
        "a_max": cert.intermediates["a_max"],
        "multiplier": cert.intermediates["multiplier"],
    }]
    report.tolerances = {"bound": 1e-11, "correction_constant_quadrature": 1e-12}
    return report


def cmd_sweep(config: RunConfig) -> SpectralReport:
    """Mass sweep: eps_min, both certificates, bound-state energies per mass."""
    if config.m_min is None or config.m_max is None or config.points is None:
        raise InputError("sweep requires --m-min, --m-max and --points")
    if config.points < 1:
        raise InputError("sweep needs at least one mass point")
    m_star = critical_mass_star()
    if not (m_star < config.m_min <= config.m_max):
        raise InputError(f"mass range must lie inside ({m_star:.6f}, inf) "
                         f"with m_min <= m_max")
    masses = np.linspace(config.m_min, config.m_max, config.points)
    grid = gauss_grid(config.grid_n, scale=config.map_scale)
    timings = {}

    start = time.perf_counter()
    sweep = monotonicity_sweep(masses, ell=config.ell, grid=grid)
    timings["eigen_sweep"] = time.perf_counter() - start

    start = time.perf_counter()
    rows = []
    for m, eps_min in sweep:
        window = spectral_window(m, config.alpha)
        states = bound_states(m, config.alpha, ell=config.ell, grid=grid) \
            if config.alpha < 0.0 else []
        rows.append({
            "m": m,
            "eps_min": eps_min,
            "c1_bound": certify_ell1(m).bound,
            "c1_certifies_absence": certify_ell1(m).certifies_absence,
            "c3_bound": certify_ell3(m).bound,
            "c3_certifies_absence": certify_ell3(m).certifies_absence,
            "energies": [s.energy for s in states],
            "window_lower": window.lower,
            "window_upper": window.upper,
        })
    timings["certificates_and_states"] = time.perf_counter() - start

    report = SpectralReport(config=config.echo())
    report.rows = rows
    report.tolerances = {"eps_min_relative": 1e-4, "certificate_bound": 1e-11}
    if config.timings:
        report.timings = timings
    return report


def cmd_spectrum(config: RunConfig) -> SpectralReport:
    """Low eigenvalues of the sector operator at one mass, with energies."""
    if config.m is None:
        raise InputError("spectrum requires --m")
    from .masses import mass_params

    p = mass_params(config.m)
    if p.m <= critical_mass_star():
        raise InputError("spectrum requires m above the stability threshold")
    grid = gauss_grid(config.grid_n, scale=config.map_scale)
    op = assemble_t1(config.ell, p, grid)
    pairs = sector_spectrum(op, count=6)
    window = spectral_window(p.m, config.alpha)
    rows = []
    for k, pair in enumerate(pairs):
        energy = (-config.alpha * config.alpha / pair.epsilon ** 2
                  if (config.alpha < 0.0 and pair.candidate) else math.nan)
        rows.append({
            "index": k, "epsilon": pair.epsilon, "candidate": pair.candidate,
            "energy": energy,
            "window_lower": window.lower if window.lower is not None else math.nan,
            "window_upper": window.upper if window.upper is not None else math.nan,
        })
    report = SpectralReport(config=config.echo())
    report.rows = rows
    report.tolerances = {"epsilon_relative": 1e-4}
    if config.alpha >= 0.0:
        report.notes = ["repulsive or unitary coupling: the discrete spectrum "
                        "is empty; no energies reported"]
    return report


def cmd_witness(config: RunConfig) -> tuple[SpectralReport, bool]:
    """Witness table; the boolean reports whether both decay checks hold."""
    if config.lam is None:
        raise InputError("witness requires --lambda")
    if config.alpha >= 0.0:
        raise InputError("witness requires an attractive coupling --alpha < 0")
    m = config.m if config.m is not None else 1.0
    points = witness_sequence(m, config.alpha, config.lam, config.indices)
    rows = [{
        "n": pt.n, "residual_norm": pt.residual_norm,
        "gram_offdiag": pt.gram_offdiag,
        "hminus_half_norm_sq": pt.hminus_half_norm_sq,
    } for pt in points]
    report = SpectralReport(config=config.echo())
    report.witness = rows
    report.tolerances = {"residual_quadrature_relative": 1e-8,
                         "gram_quadrature_relative": 1e-10}
    if len(points) < 2:
        report.notes = ["single witness index: decay checks skipped"]
        return report, True
    residuals = [pt.residual_norm for pt in points]
    grams = [abs(pt.gram_offdiag) for pt in points[:-1]]
    decays = all(a > b for a, b in zip(residuals, residuals[1:])) and \
        all(a > b for a, b in zip(grams, grams[1:]))
    if not decays:
        report.notes = ["decay check failed: residuals or Gram entries are "
                        "not decreasing along the sequence"]
    return report, decays


def _write(text: str, destination: str) -> None:
    if destination == "-":
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None,
                        help="root-finding tolerance (default 1e-10)")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default=None, help="output format (default json)")
    parser.add_argument("--output", default=None,
                        help="output path, or - for stdout (default)")
    parser.add_argument("--timings", action="store_true", default=None,
                        help="embed wall-clock timings (breaks byte determinism)")
    parser.add_argument("--config", default=None,
                        help="JSON file of flag defaults; explicit flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trimerspec",
        description="Spectral features of the 2+1 fermionic trimer with "
                    "zero-range interaction")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thresholds", help="critical mass thresholds")
    _add_common(p)

    p = sub.add_parser("certify", help="Schur absence certificate at one mass")
    p.add_argument("--ell", type=int, choices=(1, 3), default=None)
    p.add_argument("--m", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("sweep", help="mass sweep of eps_min, certificates, energies")
    p.add_argument("--m-min", dest="m_min", type=float, default=None)
    p.add_argument("--m-max", dest="m_max", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--grid-n", dest="grid_n", type=int, default=None)
    p.add_argument("--map-scale", dest="map_scale", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("spectrum", help="low sector eigenvalues at one mass")
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--grid-n", dest="grid_n", type=int, default=None)
    p.add_argument("--map-scale", dest="map_scale", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("witness", help="essential-spectrum singular-sequence table")
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--indices", default=None,
                   help="comma-separated shell indices (default 8,16,32,64)")
    _add_common(p)
    return parser


_DEFAULTS = dict(tol=1e-10, fmt="json", output="-", timings=False, alpha=-1.0,
                 ell=1, grid_n=400, map_scale=1.0, m=None, m_min=None,
                 m_max=None, points=None, lam=None, indices=(8, 16, 32, 64),
                 trial_a=1.2, trial_b=0.05)


def _merge_config(args: argparse.Namespace) -> RunConfig:
    file_values = {}
    aliases = {"format": "fmt", "lambda": "lam"}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as handle:
            raw = json.load(handle)
        if not isinstance(raw, dict):
            raise InputError("config file must hold a flat JSON object")
        for key, value in raw.items():
            key = key.replace("-", "_")
            file_values[aliases.get(key, key)] = value
    merged = {}
    for key, default in _DEFAULTS.items():
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            merged[key] = cli_value
        elif key in file_values:
            merged[key] = file_values[key]
        else:
            merged[key] = default
    if isinstance(merged["indices"], str):
        merged["indices"] = tuple(int(tok) for tok in merged["indices"].split(","))
    elif isinstance(merged["indices"], (list, tuple)):
        merged["indices"] = tuple(int(tok) for tok in merged["indices"])
    if merged["fmt"] not in ("csv", "json"):
        raise InputError(f"format must be csv or json, got {merged['fmt']!r}")
    return RunConfig(command=args.command, **merged)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _merge_config(args)
        if args.command == "thresholds":
            report, ok = cmd_thresholds(config), True
        elif args.command == "certify":
            report, ok = cmd_certify(config), True
        elif args.command == "sweep":
            report, ok = cmd_sweep(config), True
        elif args.command == "spectrum":
            report, ok = cmd_spectrum(config), True
        elif args.command == "witness":
            report, ok = cmd_witness(config)
        else:  # pragma: no cover - argparse enforces the choices
            raise InputError(f"unknown command {args.command!r}")
        _write(report.render(config.fmt), config.output)
    except _USAGE_ERRORS as exc:
        print(f"trimerspec: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"trimerspec: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0 if ok else 3


if __name__ == "__main__":
    sys.exit(main())
