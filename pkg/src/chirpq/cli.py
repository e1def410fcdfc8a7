"""Command-line entry point.

Every experiment is a subcommand; flags mirror the dimensionless ratios of
the figure captions (``--sigma-f 0.35`` means sigma_f / lambda0 = 0.35,
``--omega0 1.005`` means omega0 / omega_c, ``--Gamma 1e-6`` means
Gamma / omega_q, ``--Omega0 0.038`` means Omega0 / omega_c, ``--alpha -0.05``
means alpha / omega_q).  A JSON config may supply any of the same keys;
explicit flags override it.  Outputs are CSV tables with a ``# metadata:``
JSON header plus a summary JSON on stdout; runs are deterministic.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import experiments as ex
from . import lz as lz_mod
from .drive import (drive_window_halfwidth, driving_spectrum_roundtrip,
                    prep_from_pulse, synthesize_driving, truncate_field)
from .emitter import QubitSpec, SolverConfig, TransmonSpec, evolve_qubit
from .medium import (CrystalParams, WaveguideGeometry, crystal_band2_fit,
                     crystal_bands, omega_quadratic,
                     quadratic_band_from_waveguide, waveguide_dispersion)
from .pulse import WindowTooShortError, field_real, pulse_from_ratios, spectrum_at
from .tables import ScanTable

EXPERIMENTS = [
    "pulse-profile", "pulse-spectrum", "drive-synth", "drive-truncate",
    "qubit-trace", "qubit-scan", "transmon-scan", "gamma-sweep",
    "lz-trace", "lz-sigma-q", "waveguide-bands", "crystal-bands",
    "scatter-budget",
]


class ConfigError(ValueError):
    """Invalid run configuration; message names the offending field."""


@dataclass
class RunConfig:
    """Validated experiment configuration, all ratios as in figure captions."""

    experiment: str
    omega0_over_omega_c: float = 1.005
    k0_over_kc: float | None = None  # alternative carrier spec; sets omega0
    d_f_over_lambda0: float = 18.0
    sigma_f_over_lambda0: float = 0.35
    Omega0_over_omega_c: float = 0.038
    Gamma_over_omega_q: float = 1e-6
    omega_q_over_omega_c: float | None = None  # defaults to omega0
    phi: float = 0.0
    alpha_over_omega_q: float = -0.05
    n_levels: int = 6
    convention: str = "lab-max"
    frame: str = "rwa"
    rtol: float = 1e-8
    atol: float = 1e-12
    d_over_lambda0: float | None = None
    d_list_over_lambda0: list = field(default_factory=list)
    t_list_over_tf: list = field(default_factory=list)
    sigma_f_grid: list = field(default_factory=list)
    gamma_list: list = field(default_factory=list)
    n_grid: int = 161
    window_over_tf: float | None = None
    omega_r_over_omega_c: float = 2.0
    photon_number: float | None = None
    c1: float = 1.0
    c2: float = 0.3
    b_over_a: float = 0.5
    n_bands: int = 3
    n_k: int = 101
    jobs: int = 1
    json_tables: bool = False
    out_dir: str = "."
    seedless: bool = False

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment: unknown experiment "
                              f"{self.experiment!r}; see --list")
        positive = ["d_f_over_lambda0", "sigma_f_over_lambda0", "rtol", "atol",
                    "omega_r_over_omega_c", "c1", "c2"]
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name}: must be positive, got "
                                  f"{getattr(self, name)}")
        if self.omega0_over_omega_c <= 1.0:
            raise ConfigError("omega0_over_omega_c: must exceed 1")
        if self.k0_over_kc is not None and self.k0_over_kc <= 0:
            raise ConfigError("k0_over_kc: must be positive")
        if self.Omega0_over_omega_c < 0:
            raise ConfigError("Omega0_over_omega_c: must be non-negative")
        if self.Gamma_over_omega_q < 0:
            raise ConfigError("Gamma_over_omega_q: must be non-negative")
        if not 0 < self.b_over_a < 1:
            raise ConfigError("b_over_a: must be in (0, 1)")
        if self.n_levels < 3:
            raise ConfigError("n_levels: must be >= 3")
        if self.convention not in ("lab-max", "rwa-max"):
            raise ConfigError("convention: must be 'lab-max' or 'rwa-max'")
        if self.frame not in ("rwa", "lab"):
            raise ConfigError("frame: must be 'rwa' or 'lab'")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    # derived objects -----------------------------------------------------

    @property
    def omega0_ratio(self) -> float:
        if self.k0_over_kc is not None:
            return 1.0 + 0.5 * self.k0_over_kc**2
        return self.omega0_over_omega_c

    def pulse(self):
        return pulse_from_ratios(self.omega0_ratio, self.d_f_over_lambda0,
                                 self.sigma_f_over_lambda0, phi=self.phi)

    def qubit(self, pulse) -> QubitSpec:
        wq = (self.omega_q_over_omega_c or self.omega0_ratio)
        omega_q = wq * pulse.band.omega_c
        return QubitSpec(omega_q=omega_q,
                         gamma=self.Gamma_over_omega_q * omega_q,
                         rabi0=self.Omega0_over_omega_c * pulse.band.omega_c,
                         convention=self.convention)

    def transmon(self, pulse) -> TransmonSpec:
        wq = (self.omega_q_over_omega_c or self.omega0_ratio)
        omega_q = wq * pulse.band.omega_c
        return TransmonSpec(omega_q=omega_q,
                            alpha_anh=self.alpha_over_omega_q * omega_q,
                            gamma=self.Gamma_over_omega_q * omega_q,
                            rabi0=self.Omega0_over_omega_c * pulse.band.omega_c,
                            n_levels=self.n_levels,
                            convention=self.convention)

    def solver(self) -> SolverConfig:
        return SolverConfig(frame=self.frame, rtol=self.rtol, atol=self.atol)


def _write_table(cfg: RunConfig, table: ScanTable, name: str) -> Path:
    # execution environment (paths, worker count, the no-op determinism
    # marker) is not part of the experiment definition
    config = {k: v for k, v in cfg.to_dict().items()
              if k not in ("out_dir", "jobs", "seedless", "json_tables")}
    table.metadata["config"] = config
    out = Path(cfg.out_dir) / table.default_filename(name)
    out.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(out)
    if cfg.json_tables:
        table.to_json(out.with_suffix(".json"))
    return out


def _summary(cfg: RunConfig, files: list[Path], **extra) -> dict:
    return {"experiment": cfg.experiment, "version": __version__,
            "files": [str(f) for f in files], **extra}


# ----------------------------------------------------------------- runners


def _run_pulse_profile(cfg: RunConfig):
    p = cfg.pulse()
    ts = cfg.t_list_over_tf or [0.0, 0.5, 1.0, 2.0]
    z = np.linspace(-4 * p.lambda0, p.d_f + 8 * p.lambda0, 4001)
    e_max = 2.0 * p.amplitude / (p.k_c * p.sigma_f)
    columns = {"z_over_lambda0": z / p.lambda0}
    for t_rel in ts:
        field = field_real(p, z, t_rel * p.t_f)
        columns[f"E_over_Emax_t{t_rel:g}"] = field / e_max
    md = {"experiment": "pulse-profile", "param_name": "z_over_lambda0",
          "code_version": __version__, "E_max": e_max,
          "lambda0": p.lambda0, "t_f": p.t_f,
          "t_list_over_tf": [float(t) for t in ts],
          "omega0_over_omega_c": cfg.omega0_over_omega_c,
          "d_f_over_lambda0": cfg.d_f_over_lambda0,
          "sigma_f_over_lambda0": cfg.sigma_f_over_lambda0, "phi": cfg.phi}
    table = ScanTable(param_name="z_over_lambda0", columns=columns, metadata=md)
    f = _write_table(cfg, table, "pulse-profile")
    return _summary(cfg, [f], times_over_tf=list(map(float, ts)))


def _run_pulse_spectrum(cfg: RunConfig):
    grid = cfg.sigma_f_grid or [0.15, 0.25, 0.35, 0.5]
    means, stds = [], []
    for sfl in grid:
        p = pulse_from_ratios(cfg.omega0_ratio, cfg.d_f_over_lambda0,
                              sfl, phi=cfg.phi)
        n_samples = int(2 ** np.ceil(np.log2(
            24.0 * p.t_f * 16.0 * p.omega0 / (2.0 * np.pi))))
        stats = spectrum_at(p, 0.0, (-12.0 * p.t_f, 12.0 * p.t_f),
                            n_samples=n_samples, edge_policy="taper",
                            edge_threshold=1e-3)
        means.append(stats.mean_omega / p.band.omega_c)
        stds.append(stats.std_omega / p.band.omega_c)
    md = {"experiment": "pulse-spectrum", "param_name": "sigma_f_over_lambda0",
          "code_version": __version__,
          "omega0_over_omega_c": cfg.omega0_over_omega_c,
          "d_f_over_lambda0": cfg.d_f_over_lambda0, "phi": cfg.phi,
          "sigma_f_grid": [float(s) for s in grid]}
    table = ScanTable(param_name="sigma_f_over_lambda0", columns={
        "sigma_f_over_lambda0": np.asarray(grid, dtype=float),
        "mean_omega_over_omega_c": np.asarray(means),
        "std_omega_over_omega_c": np.asarray(stds)}, metadata=md)
    f = _write_table(cfg, table, "pulse-spectrum")
    return _summary(cfg, [f])


def _drive_prep(cfg: RunConfig):
    # the pulse lives on the waveguide's own quadratic band here
    geom = WaveguideGeometry(radius=1.0, c=1.0)
    band = quadratic_band_from_waveguide(geom)
    p = pulse_from_ratios(cfg.omega0_ratio, cfg.d_f_over_lambda0,
                          cfg.sigma_f_over_lambda0, phi=cfg.phi, band=band)
    prep = prep_from_pulse(p, geom)
    if cfg.photon_number is not None:
        from .drive import CoherentPrep, photon_number
        scale = np.sqrt(cfg.photon_number / photon_number(prep))
        prep = CoherentPrep(c_alpha=prep.c_alpha * scale, pulse=p, geom=geom)
    return prep


def _run_drive_synth(cfg: RunConfig):
    prep = _drive_prep(cfg)
    p = prep.pulse
    edge_threshold = 1e-6
    if cfg.window_over_tf is not None:
        t_half = cfg.window_over_tf * p.t_f
    else:
        try:
            t_half = drive_window_halfwidth(p, depth=6.5)
        except WindowTooShortError:
            # broadband drive reaching the band edge: tails are algebraic, no
            # finite window is deep; synthesize anyway and report the edge
            t_half = (2.5 / (p.k0 * p.sigma_f) + 3.0) * p.t_f
            edge_threshold = np.inf
    omega_max = omega_quadratic(p.band, p.k0 + 8.0 / p.sigma_f)
    n_samples = int(2 ** np.ceil(np.log2(3.0 * t_half * omega_max / np.pi)))
    spec = synthesize_driving(prep, (-t_half, t_half), n_samples=n_samples,
                              edge_threshold=edge_threshold)
    md_common = {"code_version": __version__,
                 "omega0_over_omega_c": cfg.omega0_over_omega_c,
                 "d_f_over_lambda0": cfg.d_f_over_lambda0,
                 "sigma_f_over_lambda0": cfg.sigma_f_over_lambda0,
                 "phi": cfg.phi, "c_alpha": prep.c_alpha}
    t_table = ScanTable(param_name="t", columns={
        "t": spec.times, "re_D": spec.d_time.real, "im_D": spec.d_time.imag},
        metadata={"experiment": "drive-synth-time", "param_name": "t",
                  **md_common})
    w_table = ScanTable(param_name="omega", columns={
        "omega": spec.omega, "abs_D_tilde": np.abs(spec.d_tilde)},
        metadata={"experiment": "drive-synth-spectrum", "param_name": "omega",
                  **md_common})
    f1 = _write_table(cfg, t_table, "drive-synth-time")
    f2 = _write_table(cfg, w_table, "drive-synth-spectrum")
    rt = driving_spectrum_roundtrip(spec)
    err = float(np.linalg.norm(rt - spec.d_tilde) / np.linalg.norm(spec.d_tilde))
    peak = float(np.max(np.abs(spec.d_time)))
    edge = float(max(abs(spec.d_time[0]), abs(spec.d_time[-1])) / peak)
    return _summary(cfg, [f1, f2], roundtrip_rel_l2=err, edge_level=edge,
                    window_over_tf=t_half / p.t_f)


def _run_drive_truncate(cfg: RunConfig):
    p = cfg.pulse()
    omega_r = cfg.omega_r_over_omega_c * p.band.omega_c
    times = np.linspace(0.0, 2.2 * p.t_f, 2**15)
    field = field_real(p, p.d_f, times)
    trunc = truncate_field(times, field, omega_r)
    md = {"experiment": "drive-truncate", "param_name": "t",
          "code_version": __version__,
          "omega_r_over_omega_c": cfg.omega_r_over_omega_c,
          "omega0_over_omega_c": cfg.omega0_over_omega_c,
          "d_f_over_lambda0": cfg.d_f_over_lambda0,
          "sigma_f_over_lambda0": cfg.sigma_f_over_lambda0, "phi": cfg.phi,
          "peak_ratio": float(np.max(np.abs(trunc)) / np.max(np.abs(field)))}
    table = ScanTable(param_name="t", columns={
        "t": times, "E": field, "E_truncated": trunc}, metadata=md)
    f = _write_table(cfg, table, "drive-truncate")
    return _summary(cfg, [f], peak_ratio=md["peak_ratio"])


def _run_qubit_trace(cfg: RunConfig):
    p = cfg.pulse()
    q = cfg.qubit(p)
    d = (cfg.d_over_lambda0 if cfg.d_over_lambda0 is not None
         else cfg.d_f_over_lambda0) * p.lambda0
    t_end = float(ex.readout_time(p, d))
    traj = evolve_qubit(p, q, d, (0.0, t_end), cfg.solver())
    md = {"experiment": "qubit-trace", "param_name": "t_omega_c",
          "code_version": __version__, "d_over_lambda0": d / p.lambda0,
          "t_f_omega_c": p.t_f * p.band.omega_c,
          **{k: getattr(cfg, k) for k in (
              "omega0_over_omega_c", "d_f_over_lambda0",
              "sigma_f_over_lambda0", "Omega0_over_omega_c",
              "Gamma_over_omega_q", "phi", "convention", "frame")}}
    table = ScanTable(param_name="t_omega_c", columns={
        "t_omega_c": traj.times * p.band.omega_c,
        "p_g": traj.p_g, "p_e": traj.p_e}, metadata=md)
    f = _write_table(cfg, table, "qubit-trace")
    return _summary(cfg, [f], p_e_final=float(traj.p_e[-1]))


def _scan_grid(cfg: RunConfig, p):
    return ex.default_position_grid(p, n_core=cfg.n_grid)


def _run_qubit_scan(cfg: RunConfig):
    p = cfg.pulse()
    q = cfg.qubit(p)
    table = ex.position_scan(p, q, _scan_grid(cfg, p), cfg.solver(),
                             jobs=cfg.jobs)
    stats = ex.peak_stats(table)
    table.metadata["peak"] = dataclasses.asdict(stats)
    f = _write_table(cfg, table, "qubit-scan")
    return _summary(cfg, [f], peak=dataclasses.asdict(stats))


def _run_transmon_scan(cfg: RunConfig):
    p = cfg.pulse()
    tm = cfg.transmon(p)
    table = ex.position_scan(p, tm, _scan_grid(cfg, p), cfg.solver(),
                             jobs=cfg.jobs)
    stats = ex.peak_stats(table, column="p_g")
    table.metadata["peak"] = dataclasses.asdict(stats)
    f = _write_table(cfg, table, "transmon-scan")
    return _summary(cfg, [f], peak=dataclasses.asdict(stats),
                    n_levels=table.metadata["n_levels"])


def _run_gamma_sweep(cfg: RunConfig):
    p = cfg.pulse()
    q = cfg.qubit(p)
    gammas = cfg.gamma_list or [1e-7, 1e-6, 1e-5, 1e-4]
    gamma_abs = [g * q.omega_q for g in gammas]
    d_grid = ex.default_position_grid(p, n_core=max(9, cfg.n_grid // 4))
    table, peaks = ex.gamma_sweep(p, q, gamma_abs, d_grid, cfg.solver(),
                                  jobs=cfg.jobs)
    f = _write_table(cfg, table, "gamma-sweep")
    return _summary(cfg, [f], peak_heights={f"{g:.3e}": h
                                            for g, h in peaks.items()})


def _run_lz_trace(cfg: RunConfig):
    p = cfg.pulse()
    q = cfg.qubit(p)
    d_list = cfg.d_list_over_lambda0 or [cfg.d_f_over_lambda0,
                                         cfg.d_f_over_lambda0 + 0.35,
                                         cfg.d_f_over_lambda0 + 1.0,
                                         cfg.d_f_over_lambda0 + 3.0]
    frames = []
    for dl in d_list:
        d = dl * p.lambda0
        t_pass = d / p.group_velocity
        ts = np.linspace(t_pass - 0.35 * p.t_f, t_pass + 0.35 * p.t_f, 1201)
        g, _, delta = lz_mod.lz_decompose(p, q, d, ts)
        e_lo, e_hi = lz_mod.dressed_energies(delta, g)
        frames.append((np.full(ts.shape, dl), ts, delta, g, e_lo, e_hi))
    md = {"experiment": "lz-trace", "param_name": "t_omega_c",
          "code_version": __version__, "t_f_omega_c": p.t_f * p.band.omega_c,
          "d_list_over_lambda0": [float(x) for x in d_list],
          **{k: getattr(cfg, k) for k in (
              "omega0_over_omega_c", "d_f_over_lambda0",
              "sigma_f_over_lambda0", "Omega0_over_omega_c", "phi",
              "convention")}}
    table = ScanTable(param_name="t_omega_c", columns={
        "t_omega_c": np.concatenate([f[1] for f in frames]) * p.band.omega_c,
        "d_over_lambda0": np.concatenate([f[0] for f in frames]),
        "delta_over_omega_c": np.concatenate([f[2] for f in frames]) / p.band.omega_c,
        "g_over_omega_c": np.concatenate([f[3] for f in frames]) / p.band.omega_c,
        "e_minus_over_omega_c": np.concatenate([f[4] for f in frames]) / p.band.omega_c,
        "e_plus_over_omega_c": np.concatenate([f[5] for f in frames]) / p.band.omega_c,
    }, metadata=md)
    f = _write_table(cfg, table, "lz-trace")
    return _summary(cfg, [f])


def _run_lz_sigma_q(cfg: RunConfig):
    p = cfg.pulse()
    q = cfg.qubit(p)
    est = lz_mod.sigma_q_estimate(p, q)
    md = {"experiment": "lz-sigma-q", "param_name": "d1",
          "code_version": __version__,
          **{k: getattr(cfg, k) for k in (
              "omega0_over_omega_c", "d_f_over_lambda0",
              "sigma_f_over_lambda0", "Omega0_over_omega_c", "phi")}}
    table = ScanTable(param_name="d1", columns={
        "d1": np.array([est.d1]), "d2": np.array([est.d2]),
        "sigma_q": np.array([est.sigma_q]),
        "sigma_q_over_sigma_f": np.array([est.ratio])}, metadata=md)
    f = _write_table(cfg, table, "lz-sigma-q")
    return _summary(cfg, [f], sigma_q_over_sigma_f=est.ratio)


def _run_waveguide_bands(cfg: RunConfig):
    geom = WaveguideGeometry(radius=1.0, c=1.0)
    band = quadratic_band_from_waveguide(geom)
    ks = np.linspace(-1.0 * band.k_c, 1.0 * band.k_c, cfg.n_k)
    exact = waveguide_dispersion(geom, "TM", 0, 1, ks)
    quad = omega_quadratic(band, ks)
    md = {"experiment": "waveguide-bands", "param_name": "k_over_kc",
          "code_version": __version__, "radius": geom.radius, "c": geom.c,
          "omega_c": band.omega_c}
    table = ScanTable(param_name="k_over_kc", columns={
        "k_over_kc": ks / band.k_c,
        "omega_tm01_over_omega_c": exact / band.omega_c,
        "omega_quadratic_over_omega_c": quad / band.omega_c}, metadata=md)
    f = _write_table(cfg, table, "waveguide-bands")
    return _summary(cfg, [f])


def _run_crystal_bands(cfg: RunConfig):
    params = CrystalParams(c1=cfg.c1, c2=cfg.c2, b=cfg.b_over_a, a=1.0)
    ks = np.linspace(0.0, np.pi, cfg.n_k)
    table_b = crystal_bands(params, ks, n_bands=cfg.n_bands)
    fit = crystal_band2_fit(params)
    fit_vals = (fit.band.omega_c + fit.band.v**2 * (ks - np.pi)**2
                / (2.0 * fit.band.omega_c))
    md = {"experiment": "crystal-bands", "param_name": "k_a",
          "code_version": __version__, "c1": cfg.c1, "c2": cfg.c2,
          "b_over_a": cfg.b_over_a,
          "fit_omega_c": fit.band.omega_c, "fit_v": fit.band.v,
          "fit_max_rel_deviation": fit.max_rel_deviation}
    columns = {"k_a": ks}
    for i in range(cfg.n_bands):
        columns[f"omega_band{i + 1}"] = table_b.bands[i]
    columns["omega_fit"] = fit_vals
    table = ScanTable(param_name="k_a", columns=columns, metadata=md)
    f = _write_table(cfg, table, "crystal-bands")
    return _summary(cfg, [f], fit_v=fit.band.v,
                    fit_max_rel_deviation=fit.max_rel_deviation)


def _run_scatter_budget(cfg: RunConfig):
    prep = _drive_prep(cfg)
    p = prep.pulse
    q = cfg.qubit(p)
    report = ex.scatter_budget_report(WaveguideGeometry(1.0, 1.0), prep, q)
    from .drive import photon_number
    payload = {conv: dataclasses.asdict(b) for conv, b in report.items()}
    md = {"experiment": "scatter-budget", "param_name": "nu",
          "code_version": __version__, "photon_number": photon_number(prep),
          "budgets": payload,
          **{k: getattr(cfg, k) for k in (
              "omega0_over_omega_c", "d_f_over_lambda0",
              "sigma_f_over_lambda0", "Omega0_over_omega_c", "phi")}}
    table = ScanTable(param_name="nu", columns={
        "nu": np.array([b.nu for b in report.values()]),
        "n_qubits_max": np.array([float(b.n_qubits_max)
                                  for b in report.values()]),
        "u_dipole": np.array([b.u_dipole for b in report.values()]),
        "u_pulse": np.array([b.u_pulse for b in report.values()])},
        metadata=md)
    f = _write_table(cfg, table, "scatter-budget")
    return _summary(cfg, [f], budgets=payload)


_RUNNERS = {
    "pulse-profile": _run_pulse_profile,
    "pulse-spectrum": _run_pulse_spectrum,
    "drive-synth": _run_drive_synth,
    "drive-truncate": _run_drive_truncate,
    "qubit-trace": _run_qubit_trace,
    "qubit-scan": _run_qubit_scan,
    "transmon-scan": _run_transmon_scan,
    "gamma-sweep": _run_gamma_sweep,
    "lz-trace": _run_lz_trace,
    "lz-sigma-q": _run_lz_sigma_q,
    "waveguide-bands": _run_waveguide_bands,
    "crystal-bands": _run_crystal_bands,
    "scatter-budget": _run_scatter_budget,
}


def run(config: RunConfig) -> dict:
    """Run one experiment; returns the stdout summary dict."""
    return _RUNNERS[config.experiment](config)


def _add_common_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=Path, help="JSON config file")
    sp.add_argument("--out-dir", dest="out_dir", help="output directory")
    sp.add_argument("--jobs", type=int, help="worker processes for scans")
    sp.add_argument("--seedless", action="store_true",
                    help="no-op determinism marker: runs carry no RNG state")
    sp.add_argument("--json", dest="json_tables", action="store_true",
                    help="also write each table as a JSON mirror")
    ratio = [
        ("--omega0", "omega0_over_omega_c", float, "omega0/omega_c"),
        ("--k0", "k0_over_kc", float,
         "carrier k0/k_c (alternative to --omega0)"),
        ("--d-f", "d_f_over_lambda0", float, "d_f/lambda0"),
        ("--sigma-f", "sigma_f_over_lambda0", float, "sigma_f/lambda0"),
        ("--Omega0", "Omega0_over_omega_c", float, "Omega0/omega_c"),
        ("--Gamma", "Gamma_over_omega_q", float, "Gamma/omega_q"),
        ("--omega-q", "omega_q_over_omega_c", float,
         "omega_q/omega_c (default: omega0/omega_c)"),
        ("--phi", "phi", float, "carrier phase phi (rad)"),
        ("--alpha", "alpha_over_omega_q", float, "anharmonicity alpha/omega_q"),
        ("--d", "d_over_lambda0", float, "emitter position d/lambda0"),
        ("--omega-r", "omega_r_over_omega_c", float,
         "truncation cutoff omega_r/omega_c"),
        ("--window", "window_over_tf", float,
         "half-width of the drive synthesis window in units of t_f"),
        ("--rtol", "rtol", float, "integrator relative tolerance"),
        ("--atol", "atol", float, "integrator absolute tolerance"),
        ("--n-grid", "n_grid", int, "core scan grid points"),
        ("--n-levels", "n_levels", int, "transmon Fock truncation"),
        ("--n-bands", "n_bands", int, "crystal bands to compute"),
        ("--n-k", "n_k", int, "wavenumber grid points"),
        ("--photon-number", "photon_number", float,
         "pulse photon number N_ph fixing the absolute amplitude"),
        ("--c1", "c1", float, "crystal layer-1 speed"),
        ("--c2", "c2", float, "crystal layer-2 speed"),
        ("--b-over-a", "b_over_a", float, "crystal layer-1 fill fraction b/a"),
    ]
    for flag, dest, typ, help_ in ratio:
        sp.add_argument(flag, dest=dest, type=typ, help=help_)
    sp.add_argument("--frame", choices=["rwa", "lab"], help="integration frame")
    sp.add_argument("--convention", choices=["lab-max", "rwa-max"],
                    help="peak Rabi scale convention for Omega0")
    sp.add_argument("--t", dest="t_list_over_tf", type=float, nargs="+",
                    help="profile times t/t_f")
    sp.add_argument("--d-list", dest="d_list_over_lambda0", type=float,
                    nargs="+", help="positions d/lambda0")
    sp.add_argument("--sigma-f-grid", dest="sigma_f_grid", type=float,
                    nargs="+", help="sigma_f/lambda0 grid for spectra")
    sp.add_argument("--gamma-list", dest="gamma_list", type=float, nargs="+",
                    help="decay rates Gamma/omega_q")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chirpq",
        description="Self-compressing chirped pulses and emitter addressing")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--list", action="store_true",
                        help="list available experiments and exit")
    sub = parser.add_subparsers(dest="experiment")
    for name in EXPERIMENTS:
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        _add_common_flags(sp)
    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if getattr(args, "config", None):
        text = Path(args.config).read_text()
        loaded = json.loads(text)
        if not isinstance(loaded, dict):
            raise ConfigError("config: top-level JSON must be an object")
        data.update(loaded)
    data["experiment"] = args.experiment
    for key, value in vars(args).items():
        if key in ("config", "list") or value is None:
            continue
        if key in ("t_list_over_tf", "d_list_over_lambda0", "sigma_f_grid",
                   "gamma_list") and value == []:
            continue
        if key in ("seedless", "json_tables") and value is False \
                and key not in data:
            continue
        data[key] = value
    return RunConfig.from_dict(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list:
        for name in EXPERIMENTS:
            print(name)
        return 0
    if not args.experiment:
        parser.print_help()
        return 2
    try:
        config = _merge_config(args)
    except (ConfigError, json.JSONDecodeError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    print(f"running {config.experiment} ...", file=sys.stderr)
    try:
        summary = run(config)
    except Exception as err:  # solver/regime errors with experiment context
        print(f"error running {args.experiment}: {err}", file=sys.stderr)
        return 1
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
