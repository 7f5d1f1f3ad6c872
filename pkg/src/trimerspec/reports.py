"""Structured reports: run configuration echo, CSV and JSON serialisation.

Reports embed the configuration and the tolerance of every computed quantity
so each number is reproducible from the file alone.  Column orders are part
of the public contract and versioned with the package; serialisation is
deterministic (shortest-round-trip floats, sorted JSON keys, no timestamps),
so identical config and version produce byte-identical output.  Wall-clock
timings are attached only on request, because they would break that.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from . import __version__
from .errors import InputError

THRESHOLD_COLUMNS = ("quantity", "value", "reciprocal", "tolerance")
SWEEP_COLUMNS = ("m", "eps_min", "c1_bound", "c1_certifies_absence",
                 "c3_bound", "c3_certifies_absence", "energies")
SPECTRUM_COLUMNS = ("index", "epsilon", "candidate", "energy",
                    "window_lower", "window_upper")
WITNESS_COLUMNS = ("n", "residual_norm", "gram_offdiag", "hminus_half_norm_sq")
CERTIFICATE_COLUMNS = ("ell", "m", "bound", "certifies_absence",
                       "r_max", "a_max", "multiplier")


@dataclass
class RunConfig:
    """Flat bag of command parameters; one instance per CLI invocation."""

    command: str
    tol: float = 1e-10
    fmt: str = "json"
    output: str = "-"
    timings: bool = False
    m: float | None = None
    alpha: float = -1.0
    ell: int = 1
    grid_n: int = 400
    map_scale: float = 1.0
    m_min: float | None = None
    m_max: float | None = None
    points: int | None = None
    lam: float | None = None
    indices: tuple[int, ...] = (8, 16, 32, 64)
    trial_a: float = 1.2
    trial_b: float = 0.05

    def __post_init__(self):
        if self.tol <= 0.0:
            raise InputError("tolerances must be positive")
        if self.fmt not in ("csv", "json"):
            raise InputError(f"format must be csv or json, got {self.fmt!r}")
        if self.grid_n < 16:
            raise InputError("grid size must be at least 16")
        if self.map_scale <= 0.0:
            raise InputError("map scale must be positive")

    def echo(self) -> dict:
        """JSON-ready copy of the parameters that shaped the run."""
        out = {
            "command": self.command, "tol": self.tol, "format": self.fmt,
            "alpha": self.alpha, "ell": self.ell, "grid_n": self.grid_n,
            "map_scale": self.map_scale,
        }
        for key in ("m", "m_min", "m_max", "points", "lam"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.command == "witness":
            out["indices"] = list(self.indices)
        if self.command in ("thresholds", "sweep", "spectrum"):
            out["trial_a"] = self.trial_a
            out["trial_b"] = self.trial_b
        return out


@dataclass
class SpectralReport:
    """Everything one run computed, ready for serialisation."""

    config: dict
    thresholds: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    witness: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    version: str = __version__
    timings: dict | None = None

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "config": self.config,
            "tolerances": self.tolerances,
        }
        if self.thresholds:
            payload["thresholds"] = self.thresholds
        if self.rows:
            payload["rows"] = self.rows
        if self.witness:
            payload["witness"] = self.witness
        if self.notes:
            payload["notes"] = self.notes
        if self.timings is not None:
            payload["timings"] = self.timings
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        kind = self.config.get("command")
        if kind == "thresholds":
            return self._csv(THRESHOLD_COLUMNS,
                             [[name, *fields] for name, fields in
                              ((k, (v["value"], v["reciprocal"], v["tolerance"]))
                               for k, v in self.thresholds.items())])
        if kind == "sweep":
            return self._csv(SWEEP_COLUMNS, [
                [row["m"], row["eps_min"], row["c1_bound"],
                 row["c1_certifies_absence"], row["c3_bound"],
                 row["c3_certifies_absence"],
                 ";".join(_fmt(e) for e in row["energies"])]
                for row in self.rows])
        if kind == "spectrum":
            return self._csv(SPECTRUM_COLUMNS, [
                [row[c] for c in SPECTRUM_COLUMNS] for row in self.rows])
        if kind == "witness":
            return self._csv(WITNESS_COLUMNS, [
                [row[c] for c in WITNESS_COLUMNS] for row in self.witness])
        if kind == "certify":
            return self._csv(CERTIFICATE_COLUMNS, [
                [row[c] for c in CERTIFICATE_COLUMNS] for row in self.rows])
        raise InputError(f"no CSV layout for command {kind!r}")

    @staticmethod
    def _csv(columns, rows) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)  # RFC-4180 quoting and CRLF line endings
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_csv() if fmt == "csv" else self.to_json()


def _fmt(cell) -> str:
    # Shortest round-trip representation keeps CSV output byte-deterministic.
    if isinstance(cell, bool):
        return "true" if cell else "false"
    if isinstance(cell, float):
        return repr(cell)
    return str(cell)


def threshold_entry(value: float, tolerance: float) -> dict:
    return {"value": value, "reciprocal": 1.0 / value, "tolerance": tolerance}
