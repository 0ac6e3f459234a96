"""Config-driven scenario runner.

``homsim run config.json [--out DIR]`` reproduces the standard result
surfaces/curves as CSV files plus a ``manifest.json`` with checksums;
``homsim validate config.json`` reports config problems without running.
Exit codes: 0 success, 2 unparseable config, 3 validation failure,
4 numerical convergence failure.  Outputs are bit-identical across
reruns of the same config (and seed).  The environment variable
HOMSIM_THREADS caps worker threads for Monte Carlo chunk generation.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .ensemble import averaged_coincidence_curve, gaussian_delta_family
from .errors import HomsimError, QuadratureNotConverged
from .gaussian import PhotonPairConfig, p_2hnu, p_inh, p_total
from .interference import joint_density, write_density_csv
from .montecarlo import (
    coincidence_histogram,
    estimate_total_coincidence,
    run_experiment,
    save_event_log,
)
from .wavepacket import read_mode_csv

__all__ = ["ScenarioConfig", "run", "validate", "main"]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_CONVERGENCE = 4

SCENARIOS = ("fig2-surface", "fig3-dip", "fig4-surface", "beat-curve",
             "montecarlo", "custom-modes")

_DEFAULT_GRIDS = {
    "tau": {"min": -4.0, "max": 4.0, "n": 321},
    "delta_tau": {"min": -3.0, "max": 3.0, "n": 121},
    "delta_omega": {"min": 0.0, "max": 6.0, "n": 61},
    "t0": {"min": -4.0, "max": 4.0, "n": 161},
}

_DEFAULT_DELTA_VALUES = [0.0, math.pi / 2.0, 3.0 * math.pi]
_DEFAULT_DELTA_OMEGA_VALUES = [1.0, 2.0, 4.0]


@dataclass
class ScenarioConfig:
    """Parsed scenario configuration (see README for the JSON schema)."""

    scenario: str
    parameters: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)
    output: str = "."
    seed: int | None = None
    n_pairs: int = 100_000
    bin_width: float = 0.05
    hist_range: float = 4.0
    delta_values: list = field(default_factory=lambda: list(_DEFAULT_DELTA_VALUES))
    delta_omega_values: list = field(
        default_factory=lambda: list(_DEFAULT_DELTA_OMEGA_VALUES))
    method: str = "closed-form"
    modes: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_file(cls, path) -> "ScenarioConfig":
        with open(path) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config root must be a JSON object")
        cfg = cls(scenario=raw.get("scenario", ""), raw=raw)
        cfg.parameters = raw.get("parameters", {})
        cfg.grids = raw.get("grids", {})
        cfg.output = raw.get("output", ".")
        cfg.seed = raw.get("seed")
        cfg.n_pairs = raw.get("n_pairs", cfg.n_pairs)
        cfg.bin_width = raw.get("bin_width", cfg.bin_width)
        cfg.hist_range = raw.get("hist_range", cfg.hist_range)
        cfg.delta_values = raw.get("delta_values", cfg.delta_values)
        cfg.delta_omega_values = raw.get("delta_omega_values",
                                         cfg.delta_omega_values)
        cfg.method = raw.get("method", cfg.method)
        cfg.modes = raw.get("modes", {})
        return cfg

    def grid_values(self, name: str) -> np.ndarray:
        entry = {**_DEFAULT_GRIDS[name], **self.grids.get(name, {})}
        return np.linspace(float(entry["min"]), float(entry["max"]),
                           int(entry["n"]))

    def photon_pair_config(self) -> PhotonPairConfig:
        p = self.parameters
        return PhotonPairConfig(
            delta_tau=float(p.get("delta_tau", 0.0)),
            delta=float(p.get("delta", 0.0)),
            omega_mean=float(p.get("omega_mean", 0.0)),
            delta_omega=float(p.get("delta_omega", 0.0)))


def _check_grid(cfg: ScenarioConfig, name: str, issues: list) -> None:
    entry = {**_DEFAULT_GRIDS[name], **cfg.grids.get(name, {})}
    try:
        lo, hi, n = float(entry["min"]), float(entry["max"]), int(entry["n"])
    except (TypeError, ValueError, KeyError):
        issues.append(f"grids.{name}: min/max/n must be numbers")
        return
    if n < 1:
        issues.append(f"grids.{name}: empty range (n={n})")
    if n > 1 and not lo < hi:
        issues.append(f"grids.{name}: min must be below max")


def validate_config(cfg: ScenarioConfig) -> list:
    """All config invariant violations, empty when clean."""
    issues: list = []
    if cfg.scenario not in SCENARIOS:
        issues.append(
            f"scenario: unknown {cfg.scenario!r}; expected one of {SCENARIOS}")
        return issues

    for key, value in cfg.parameters.items():
        if key not in ("delta_tau", "delta", "omega_mean", "delta_omega"):
            issues.append(f"parameters.{key}: unknown parameter")
        elif not isinstance(value, (int, float)) or not math.isfinite(value):
            issues.append(f"parameters.{key}: must be a finite number")
    delta_omega = cfg.parameters.get("delta_omega", 0.0)
    if isinstance(delta_omega, (int, float)) and delta_omega < 0:
        issues.append("parameters.delta_omega: must be nonnegative")

    needed = {
        "fig2-surface": ("delta_tau", "tau"),
        "fig3-dip": ("tau",),
        "fig4-surface": ("delta_tau", "delta_omega"),
        "beat-curve": ("tau",),
        "montecarlo": (),
        "custom-modes": ("t0", "tau"),
    }[cfg.scenario]
    for name in needed:
        _check_grid(cfg, name, issues)

    if cfg.scenario == "fig2-surface":
        if not cfg.delta_values:
            issues.append("delta_values: must be a nonempty list")
    if cfg.scenario == "fig3-dip":
        if not cfg.delta_omega_values:
            issues.append("delta_omega_values: must be a nonempty list")
        elif any(not isinstance(v, (int, float)) or v < 0
                 for v in cfg.delta_omega_values):
            issues.append("delta_omega_values: entries must be nonnegative numbers")
        if cfg.method not in ("closed-form", "quadrature"):
            issues.append("method: must be 'closed-form' or 'quadrature'")
    if cfg.scenario == "fig4-surface":
        entry = {**_DEFAULT_GRIDS["delta_omega"],
                 **cfg.grids.get("delta_omega", {})}
        if float(entry.get("min", 0.0)) < 0:
            issues.append("grids.delta_omega: min must be nonnegative")
    if cfg.scenario == "montecarlo":
        if cfg.seed is None or not isinstance(cfg.seed, int):
            issues.append("seed: required integer for montecarlo scenarios")
        if not isinstance(cfg.n_pairs, int) or cfg.n_pairs < 100:
            issues.append("n_pairs: must be an integer >= 100 (the summary "
                          "reports a coincidence estimate)")
        if not isinstance(cfg.bin_width, (int, float)) or cfg.bin_width <= 0:
            issues.append("bin_width: must be positive")
        if (not isinstance(cfg.hist_range, (int, float))
                or cfg.hist_range < cfg.bin_width):
            issues.append("hist_range: must admit at least one bin")
    if cfg.scenario == "custom-modes":
        for key in ("mode1", "mode2"):
            path = cfg.modes.get(key)
            if not path:
                issues.append(f"modes.{key}: required CSV path")
            elif not Path(path).is_file():
                issues.append(f"modes.{key}: file not found: {path}")

    out = Path(cfg.output)
    if out.exists() and not out.is_dir():
        issues.append(f"output: {cfg.output!r} exists and is not a directory")
    return issues


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_rows(path: Path, header: str, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _run_fig2(cfg: ScenarioConfig, out: Path) -> list:
    delta_tau = cfg.grid_values("delta_tau")
    tau = cfg.grid_values("tau")

    def rows():
        for d in cfg.delta_values:
            for dt in delta_tau:
                pc = PhotonPairConfig(delta_tau=float(dt), delta=float(d))
                dens = p_2hnu(tau, pc)
                for tv, pv in zip(tau, dens):
                    yield (d, dt, tv, pv)

    path = out / "fig2-surface.csv"
    _write_rows(path, "delta,delta_tau,tau,density", rows())
    return [path]


def _run_fig3(cfg: ScenarioConfig, out: Path) -> list:
    tau = cfg.grid_values("tau")

    def dip(dw: float):
        if cfg.method == "quadrature":
            curve = averaged_coincidence_curve(gaussian_delta_family(), dw, tau)
            return curve.x, curve.y
        return tau, p_inh(tau, dw)

    def rows():
        for dw in cfg.delta_omega_values:
            xs, dens = dip(float(dw))
            for tv, pv in zip(xs, np.atleast_1d(dens)):
                yield (dw, tv, pv)

    path = out / "fig3-dip.csv"
    _write_rows(path, "delta_omega,tau,density", rows())
    return [path]


def _run_fig4(cfg: ScenarioConfig, out: Path) -> list:
    delta_tau = cfg.grid_values("delta_tau")
    delta_omega = cfg.grid_values("delta_omega")

    def rows():
        for dt in delta_tau:
            vals = p_total(float(dt), delta_omega)
            for dw, pv in zip(delta_omega, np.atleast_1d(vals)):
                yield (dt, dw, pv)

    path = out / "fig4-surface.csv"
    _write_rows(path, "delta_tau,delta_omega,p_total", rows())
    return [path]


def _run_beat(cfg: ScenarioConfig, out: Path) -> list:
    tau = cfg.grid_values("tau")
    dens = p_2hnu(tau, cfg.photon_pair_config())
    path = out / "beat-curve.csv"
    _write_rows(path, "tau,density", zip(tau, dens))
    return [path]


def _run_montecarlo(cfg: ScenarioConfig, out: Path) -> list:
    pc = cfg.photon_pair_config()
    log = run_experiment(pc, cfg.n_pairs, cfg.seed)
    csv_path = out / "montecarlo.csv"
    sidecar = save_event_log(log, csv_path)

    hist = coincidence_histogram(log, float(cfg.bin_width),
                                 float(cfg.hist_range))
    hist_path = out / "montecarlo-histogram.csv"
    with open(hist_path, "w", newline="") as fh:
        fh.write("category,bin_low,bin_high,count,density\n")
        norm = 1.0 / (log.n_pairs * hist.bin_width)
        for lo, hi, c in zip(hist.bin_edges[:-1], hist.bin_edges[1:],
                             hist.opposite_counts):
            fh.write(f"opposite,{_fmt(lo)},{_fmt(hi)},{c:d},{_fmt(c * norm)}\n")
        for name, counts in (("same-port-3", hist.same3_counts),
                             ("same-port-4", hist.same4_counts)):
            for lo, hi, c in zip(hist.same_edges[:-1], hist.same_edges[1:],
                                 counts):
                fh.write(f"{name},{_fmt(lo)},{_fmt(hi)},{c:d},{_fmt(c * norm)}\n")

    est = estimate_total_coincidence(log)
    summary_path = out / "montecarlo-summary.json"
    with open(summary_path, "w") as fh:
        json.dump({
            "opposite_fraction": est.estimate,
            "wilson_ci_95": [est.ci_low, est.ci_high],
            "n_pairs": est.n_pairs,
            "n_opposite": est.n_opposite,
        }, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return [csv_path, sidecar, hist_path, summary_path]


def _run_custom_modes(cfg: ScenarioConfig, out: Path) -> list:
    m1 = read_mode_csv(cfg.modes["mode1"])
    m2 = read_mode_csv(cfg.modes["mode2"])
    t0 = cfg.grid_values("t0")
    tau = cfg.grid_values("tau")
    dens = joint_density(m1, m2, t0[:, None], tau[None, :])
    path = out / "custom-modes.csv"
    write_density_csv(path, t0, tau, dens)
    return [path]


_RUNNERS = {
    "fig2-surface": _run_fig2,
    "fig3-dip": _run_fig3,
    "fig4-surface": _run_fig4,
    "beat-curve": _run_beat,
    "montecarlo": _run_montecarlo,
    "custom-modes": _run_custom_modes,
}


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def run(config_path, out_dir=None) -> int:
    """Execute a scenario config; writes data files and manifest.json."""
    try:
        cfg = ScenarioConfig.from_file(config_path)
    except (OSError, ValueError) as exc:
        print(f"error: cannot parse config: {exc}", file=sys.stderr)
        return EXIT_PARSE

    if out_dir is not None:
        cfg.output = str(out_dir)
    issues = validate_config(cfg)
    if issues:
        for issue in issues:
            print(f"invalid: {issue}", file=sys.stderr)
        return EXIT_VALIDATION

    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    try:
        files = _RUNNERS[cfg.scenario](cfg, out)
    except QuadratureNotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except HomsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    manifest = {
        "scenario": cfg.scenario,
        "config": cfg.raw,
        "version": __version__,
        "backend": BACKEND,
        "numpy_version": np.__version__,
        "files": {f.name: _sha256(f) for f in files},
    }
    manifest_path = out / "manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for f in files + [manifest_path]:
        print(f"wrote {f}")
    return EXIT_OK


def validate(config_path) -> int:
    """Report config problems without running; exit 0 when clean."""
    try:
        cfg = ScenarioConfig.from_file(config_path)
    except (OSError, ValueError) as exc:
        print(f"error: cannot parse config: {exc}", file=sys.stderr)
        return EXIT_PARSE
    issues = validate_config(cfg)
    if issues:
        for issue in issues:
            print(f"invalid: {issue}")
        return EXIT_VALIDATION
    print("0 issues")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="homsim",
        description="Time-resolved two-photon interference scenario runner")
    parser.add_argument("--version", action="version",
                        version=f"homsim {__version__} (kernels: {BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config")
    p_run.add_argument("config", help="path to the JSON config")
    p_run.add_argument("--out", default=None,
                       help="output directory (overrides config)")

    p_val = sub.add_parser("validate", help="validate a config without running")
    p_val.add_argument("config", help="path to the JSON config")

    args = parser.parse_args(argv)
    if args.command == "run":
        return run(args.config, args.out)
    return validate(args.config)


if __name__ == "__main__":
    sys.exit(main())
