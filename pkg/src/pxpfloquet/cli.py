"""Command-line entry point: configuration, orchestration and file emission."""
from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
import warnings
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .basis import (ChainGeometry, SymmetrySector, build_sector_basis,
                    enumerate_basis, fibonacci)
from .diagnostics import (PhaseThresholds, classify_phase_point,
                          level_statistics, zero_mode_census)
from .effective import (critical_frequencies, fpt_closed_form, magnus_terms,
                        norm_split)
from .floquet import (build_floquet_operator, diagonalize_floquet,
                      floquet_hamiltonian_exact, unitarity_residual)
from .io import fmt, write_csv, write_json
from .observables import (correlator_series, eigenstate_entanglement,
                          fidelity_series, fourier_peak, identify_scars,
                          initial_state, state_overlaps)
from .operators import DEFAULT_W, DriveProtocol, build_correlator

EXPERIMENTS = ("basis", "spectrum", "dynamics", "entanglement", "norms",
               "levelstats", "zeromodes", "sweep", "magnus-check")


class ConfigError(ValueError):
    pass


def load_config(path: str) -> dict:
    """Plain key = value file; '#' starts a comment."""
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"malformed config line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        cfg[key] = value
    return cfg


def _add_common(sub):
    sub.add_argument("--config", help="key=value config file; flags override it")
    sub.add_argument("--L", type=int, default=None)
    sub.add_argument("--lambda", dest="lam", type=float, default=None)
    sub.add_argument("--omega", type=float, default=None)
    sub.add_argument("--w", type=float, default=None)
    sub.add_argument("--state", default=None,
                     help="Z2 | Z2bar | Z2plus | vacuum | bitstring")
    sub.add_argument("--nmax", type=int, default=None)
    sub.add_argument("--jobs", type=int, default=None)
    sub.add_argument("--out", default=None)
    sub.add_argument("--threshold-overlap", type=float, default=None)
    sub.add_argument("--seedless", action="store_true",
                     help="assert that no randomness enters the run (always true)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pxpfloquet",
        description="Exact diagonalization of the periodically driven "
                    "constrained spin chain (energies in units of w/sqrt(2) "
                    "for the default w).")
    subs = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        sub = subs.add_parser(name)
        _add_common(sub)
        if name in ("norms", "sweep"):
            sub.add_argument("--omega-min", type=float, default=None)
            sub.add_argument("--omega-max", type=float, default=None)
            sub.add_argument("--omega-step", type=float, default=None)
        if name == "sweep":
            sub.add_argument("--lambda-list", default=None,
                             help="comma-separated drive amplitudes")
        if name == "magnus-check":
            sub.add_argument("--omega-list", default=None,
                             help="comma-separated drive frequencies")
    return parser


class RunConfig:
    """Resolved parameters for one experiment run."""

    def __init__(self, args):
        cfg = load_config(args.config) if getattr(args, "config", None) else {}

        def pick(attr, key, cast, default):
            cli = getattr(args, attr, None)
            if cli is not None:
                return cli
            if key in cfg:
                return cast(cfg[key])
            return default

        self.experiment = args.experiment
        self.L = pick("L", "L", int, 14)
        self.lam = pick("lam", "lambda", float, 15.0)
        self.omega = pick("omega", "omega", float, 15.0)
        self.w = pick("w", "w", float, DEFAULT_W)
        self.state = pick("state", "state", str, "Z2")
        self.nmax = pick("nmax", "nmax", int, 600)
        self.jobs = pick("jobs", "jobs", int, 1)
        self.out = Path(pick("out", "out", str, "."))
        self.threshold_overlap = pick("threshold_overlap", "threshold_overlap",
                                      float, 1e-2)
        self.omega_min = pick("omega_min", "omega_min", float, None)
        self.omega_max = pick("omega_max", "omega_max", float, None)
        self.omega_step = pick("omega_step", "omega_step", float, None)
        self.lambda_list = pick("lambda_list", "lambda_list", str, None)
        self.omega_list = pick("omega_list", "omega_list", str, None)
        self.validate()

    def validate(self):
        ChainGeometry(self.L)  # raises on bad L
        if self.omega <= 0:
            raise ConfigError("omega must be positive")
        if self.nmax < 0:
            raise ConfigError("nmax must be non-negative")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.experiment in ("entanglement", "zeromodes") and self.L % 2 != 0:
            raise ConfigError(f"experiment {self.experiment} requires even L")

    def protocol(self) -> DriveProtocol:
        return DriveProtocol(w=self.w, lam=self.lam, omega=self.omega)

    def meta(self) -> dict:
        return {
            "version": __version__,
            "experiment": self.experiment,
            "L": self.L,
            "lambda": self.lam,
            "omega": self.omega,
            "w": self.w,
            "state": self.state,
            "nmax": self.nmax,
            "threshold_overlap": self.threshold_overlap,
            "units": "energies in units of w/sqrt(2) when w = sqrt(2)",
        }


def _omega_grid(cfg: RunConfig):
    if cfg.omega_min is None or cfg.omega_max is None or cfg.omega_step is None:
        raise ConfigError("this experiment needs --omega-min/--omega-max/--omega-step")
    n = int(round((cfg.omega_max - cfg.omega_min) / cfg.omega_step)) + 1
    return [cfg.omega_min + i * cfg.omega_step for i in range(n)]


def run_basis(cfg: RunConfig):
    basis = enumerate_basis(ChainGeometry(cfg.L))
    rows = [(i, format(int(s), f"0{cfg.L}b")[::-1])  # site-1-first bitstring
            for i, s in enumerate(basis.states)]
    write_csv(cfg.out / "basis.csv", ("ordinal", "bitstring"), rows, cfg.meta())


def _full_spectrum(cfg: RunConfig):
    basis = enumerate_basis(ChainGeometry(cfg.L))
    evo = build_floquet_operator(basis, cfg.protocol())
    return basis, evo, diagonalize_floquet(evo)


def run_spectrum(cfg: RunConfig, with_entropy: bool | None = None):
    basis, _, spectrum = _full_spectrum(cfg)
    psi0 = initial_state(basis, cfg.state)
    overlaps = state_overlaps(spectrum, psi0)
    if with_entropy is None:
        with_entropy = cfg.L % 2 == 0
    entropies = (eigenstate_entanglement(spectrum, None, basis)
                 if with_entropy else np.full(spectrum.dim, np.nan))
    meta = cfg.meta()
    meta["convention"] = "overlap against " + cfg.state
    rows = [(i, float(spectrum.quasienergies[i]), float(overlaps[i]),
             float(entropies[i])) for i in range(spectrum.dim)]
    write_csv(cfg.out / "spectrum.csv",
              ("index", "quasienergy", "overlap2", "entropy_half"), rows, meta)


def run_entanglement(cfg: RunConfig):
    run_spectrum(cfg, with_entropy=True)


def run_dynamics(cfg: RunConfig):
    basis = enumerate_basis(ChainGeometry(cfg.L))
    protocol = cfg.protocol()
    evo = build_floquet_operator(basis, protocol)
    psi0 = initial_state(basis, cfg.state)
    o22 = build_correlator(basis)
    corr = correlator_series(psi0, evo, o22, cfg.nmax)
    fid = fidelity_series(psi0, evo, cfg.nmax)
    meta = cfg.meta()
    meta["convention"] = "O22 site-resolved at sites 2 and 4, site 1 = LSB"
    rows = [(n, float(corr.values[n]), float(fid.values[n]))
            for n in range(cfg.nmax + 1)]
    write_csv(cfg.out / "series.csv", ("n", "O22", "fidelity"), rows, meta)

    four = fourier_peak(corr, protocol.period)
    write_csv(cfg.out / "fourier.csv", ("omega", "power"),
              [(float(o), float(p)) for o, p in zip(four.omega, four.power)],
              dict(meta, omega_res=four.omega_res, at_floor=four.at_floor))

    spectrum = diagonalize_floquet(evo)
    scars = identify_scars(spectrum, psi0, threshold=cfg.threshold_overlap)
    write_json(cfg.out / "scars.json", {
        "members": [int(i) for i in scars.members],
        "w_R": scars.w_r,
        "threshold": scars.threshold,
        "omega_res": four.omega_res,
        "config": {k: fmt(v) for k, v in cfg.meta().items()},
    })


def run_norms(cfg: RunConfig):
    basis = enumerate_basis(ChainGeometry(cfg.L))
    omegas = _omega_grid(cfg) if cfg.omega_min is not None else [cfg.omega]
    rows = []
    for omega in omegas:
        protocol = DriveProtocol(w=cfg.w, lam=cfg.lam, omega=omega)
        evo = build_floquet_operator(basis, protocol)
        spectrum = diagonalize_floquet(evo)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            h_f = floquet_hamiltonian_exact(spectrum)
        split = norm_split(h_f, basis)
        gamma = protocol.gamma
        f1_analytic = cfg.w ** 2 * (np.sinc(gamma / np.pi)) ** 2
        rows.append((omega, cfg.lam, gamma, protocol.delta, split.f1, split.f2,
                     float(f1_analytic), spectrum.branch_edge_flag()))
    write_csv(cfg.out / "norms.csv",
              ("omega", "lambda", "gamma", "delta", "f1_exact", "f2_exact",
               "f1_analytic", "branch_warning"), rows, cfg.meta())


def run_levelstats(cfg: RunConfig):
    basis = enumerate_basis(ChainGeometry(cfg.L))
    sector = build_sector_basis(basis, SymmetrySector(0, +1))
    evo = build_floquet_operator(sector, cfg.protocol())
    spectrum = diagonalize_floquet(evo)
    stats = level_statistics(spectrum)
    rows = [(float(stats.bins[i]), float(stats.bins[i + 1]), float(stats.densities[i]))
            for i in range(len(stats.densities))]
    meta = cfg.meta()
    meta["mean_r"] = stats.mean_r
    meta["low_confidence"] = stats.low_confidence
    meta["sector"] = sector.sector.tag
    write_csv(cfg.out / "levelstats.csv", ("bin_left", "bin_right", "density"),
              rows, meta)


def run_zeromodes(cfg: RunConfig):
    basis, _, spectrum = _full_spectrum(cfg)
    count, bound = zero_mode_census(spectrum, basis.geometry)
    write_json(cfg.out / "zeromodes.json", {
        "count": count,
        "bound": bound,
        "bound_formula": f"F_{cfg.L // 2} = {fibonacci(cfg.L // 2)}",
        "config": {k: fmt(v) for k, v in cfg.meta().items()},
    })


def _sweep_worker(task):
    omega, lam, L, state, nmax, threshold = task
    thresholds = PhaseThresholds(n_max=nmax, overlap_threshold=threshold)
    return classify_phase_point(omega, lam, L, state_name=state,
                                thresholds=thresholds)


def run_sweep(cfg: RunConfig):
    omegas = _omega_grid(cfg)
    lams = ([float(x) for x in cfg.lambda_list.split(",")]
            if cfg.lambda_list else [cfg.lam])
    state = cfg.state if cfg.state != "Z2" else "Z2plus"  # sector dynamics
    nmax = max(cfg.nmax, 500)
    tasks = [(omega, lam, cfg.L, state, nmax, cfg.threshold_overlap)
             for lam in lams for omega in omegas]
    if cfg.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            points = list(pool.map(_sweep_worker, tasks))
    else:
        points = [_sweep_worker(t) for t in tasks]
    rows = [(p.omega, p.lam, p.L, p.classification, p.std_late, p.mean_late,
             p.inf_t_value, p.scar_count, p.peak_prominence, p.branch_warning)
            for p in points]
    meta = cfg.meta()
    meta["state"] = state
    write_csv(cfg.out / "sweep.csv",
              ("omega", "lambda", "L", "classification", "std_late",
               "mean_late", "inf_T_value", "scar_count", "peak_prominence",
               "branch_warning"), rows, meta)
    write_json(cfg.out / "sweep_manifest.json", {
        "thresholds": asdict(PhaseThresholds(n_max=nmax,
                                             overlap_threshold=cfg.threshold_overlap)),
        "critical_frequencies": {fmt(lam): critical_frequencies(lam, 6)
                                 for lam in lams},
        "config": {k: fmt(v) for k, v in meta.items()},
    })


def run_magnus_check(cfg: RunConfig):
    basis = enumerate_basis(ChainGeometry(cfg.L))
    omegas = ([float(x) for x in cfg.omega_list.split(",")]
              if cfg.omega_list else [cfg.omega])
    rows = []
    for omega in omegas:
        protocol = DriveProtocol(w=cfg.w, lam=cfg.lam, omega=omega)
        evo = build_floquet_operator(basis, protocol)
        spectrum = diagonalize_floquet(evo)
        h_exact = floquet_hamiltonian_exact(spectrum)
        terms = magnus_terms(basis, protocol)
        approx = terms.h0 + terms.h1
        residual = float(np.linalg.norm(h_exact - approx)
                         / np.linalg.norm(h_exact))
        rows.append((omega, protocol.gamma, protocol.delta, residual,
                     float(unitarity_residual(evo))))
    write_csv(cfg.out / "magnus.csv",
              ("omega", "gamma", "delta", "relative_residual",
               "unitarity_residual"), rows, cfg.meta())


RUNNERS = {
    "basis": run_basis,
    "spectrum": run_spectrum,
    "dynamics": run_dynamics,
    "entanglement": run_entanglement,
    "norms": run_norms,
    "levelstats": run_levelstats,
    "zeromodes": run_zeromodes,
    "sweep": run_sweep,
    "magnus-check": run_magnus_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args)
        RUNNERS[cfg.experiment](cfg)
    except Exception as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
