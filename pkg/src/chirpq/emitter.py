"""Open-system dynamics of emitters driven by the chirped pulse.

Two emitter models:

* a two-level qubit, H = (omega_q/2) sigma_z + (Omega/2) sigma_+ + h.c.,
  with spontaneous emission at rate Gamma through sigma_-;
* a weakly anharmonic oscillator (transmon),
  H = omega_q b+b + (alpha/2) [(b+b)^2 - b+b] + (Omega/2) b+ + h.c.,
  decaying through b.

The default frame co-rotates with the pulse carrier omega0: the drive enters
through the slowly varying complex Rabi amplitude `rabi_envelope`, whose peak
over position and time is Omega0/2 under the "lab-max" convention
(Omega0 = maximum of the rotating coupling to the real field E = 2 Re E+) or
Omega0 under "rwa-max".  The lab frame integrates the full fast-oscillating
Hamiltonian and is kept for validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import pulse as pulse_mod
from .lindblad import check_density_matrix, evolve_lindblad
from .pulse import PulseParams

__all__ = [
    "QubitSpec",
    "TransmonSpec",
    "SolverConfig",
    "Trajectory",
    "TruncationError",
    "rabi_envelope",
    "evolve_qubit",
    "evolve_qubit_batch",
    "evolve_transmon",
    "evolve_transmon_batch",
    "populations_at",
]

_CONVENTIONS = ("lab-max", "rwa-max")


class TruncationError(RuntimeError):
    """Fock-space truncation did not converge."""


@dataclass(frozen=True)
class QubitSpec:
    """Two-level emitter: transition frequency, decay rate, peak Rabi scale."""

    omega_q: float
    gamma: float
    rabi0: float
    convention: str = "lab-max"

    def __post_init__(self):
        if self.omega_q <= 0:
            raise ValueError("omega_q must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.rabi0 < 0:
            raise ValueError("rabi0 must be non-negative")
        if self.convention not in _CONVENTIONS:
            raise ValueError(f"convention must be one of {_CONVENTIONS}")


@dataclass(frozen=True)
class TransmonSpec:
    """Anharmonic-oscillator emitter; alpha_anh < 0 for a transmon."""

    omega_q: float
    alpha_anh: float
    gamma: float
    rabi0: float
    n_levels: int = 6
    convention: str = "lab-max"

    def __post_init__(self):
        if self.omega_q <= 0:
            raise ValueError("omega_q must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.rabi0 < 0:
            raise ValueError("rabi0 must be non-negative")
        if self.n_levels < 3:
            raise ValueError("n_levels must be >= 3")
        if self.convention not in _CONVENTIONS:
            raise ValueError(f"convention must be one of {_CONVENTIONS}")


@dataclass(frozen=True)
class SolverConfig:
    """Integration frame and tolerances; max_step=None derives the default cap.

    The absolute tolerance sits at 1e-12: near-zero populations inherit the
    integrator's absolute error floor, and a looser atol would let density
    matrices pick up spurious negative eigenvalues beyond the 1e-10 allowance.
    """

    frame: str = "rwa"
    rtol: float = 1e-8
    atol: float = 1e-12
    max_step: float | None = None

    def __post_init__(self):
        if self.frame not in ("rwa", "lab"):
            raise ValueError("frame must be 'rwa' or 'lab'")
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("rtol and atol must be positive")


@dataclass
class Trajectory:
    """Time-stamped density matrices of one evolution."""

    times: np.ndarray
    rhos: np.ndarray  # (T, n, n)
    meta: dict = field(default_factory=dict)

    @property
    def n_levels(self) -> int:
        return self.rhos.shape[-1]

    @property
    def populations(self) -> np.ndarray:
        """(T, n) diagonal populations."""
        return np.real(np.einsum("tii->ti", self.rhos))

    @property
    def p_g(self) -> np.ndarray:
        return self.populations[:, 0]

    @property
    def p_e(self) -> np.ndarray:
        return self.populations[:, 1]

    def p_n(self, n: int) -> np.ndarray:
        return self.populations[:, n]

    def check(self, herm_tol=1e-12, trace_tol=1e-10, psd_tol=1e-10) -> None:
        check_density_matrix(self.rhos, herm_tol, trace_tol, psd_tol)


def populations_at(traj: Trajectory, t) -> np.ndarray:
    """Level populations at time t, linearly interpolated between samples.

    Linear interpolation keeps each population inside the bracketing samples'
    range and preserves the unit sum.  Raises for t outside the stored span.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < traj.times[0]) or np.any(t > traj.times[-1]):
        raise ValueError(f"t={t} outside trajectory span "
                         f"[{traj.times[0]}, {traj.times[-1]}]")
    pops = traj.populations
    out = np.stack([np.interp(t, traj.times, pops[:, i])
                    for i in range(pops.shape[1])], axis=-1)
    return out


def _rwa_amplitude_scale(qubit) -> float:
    """Peak of |rabi_envelope| over position and time for the given convention."""
    return qubit.rabi0 / 2.0 if qubit.convention == "lab-max" else qubit.rabi0


def rabi_envelope(pulse: PulseParams, qubit, d, t):
    """Complex Rabi amplitude in the frame rotating at the carrier omega0.

    A (sigma_f / sigma(t)) exp(-sigma_f^2 (d - v t / eta)^2 / (2 sigma^4))
      * exp(i (theta(d, t) + k0 d + phi)),
    with A = Omega0/2 (lab-max) or Omega0 (rwa-max).
    """
    amp = _rwa_amplitude_scale(qubit)
    d = np.asarray(d, dtype=float)
    t = np.asarray(t, dtype=float)
    sig = pulse_mod.sigma_t(pulse, t)
    u = d - pulse.group_velocity * t
    mag = (amp * (pulse.sigma_f / sig)
           * np.exp(-pulse.sigma_f**2 * u**2 / (2.0 * sig**4)))
    phase = pulse_mod.theta(pulse, d, t) + pulse.k0 * d + pulse.phi
    out = mag * np.exp(1j * np.asarray(phase))
    return out if np.ndim(out) else complex(out)


def _default_max_step(pulse: PulseParams, qubit, cfg: SolverConfig,
                      t_span) -> float:
    if cfg.max_step is not None:
        return cfg.max_step
    if cfg.frame == "lab":
        scale = max(qubit.omega_q, qubit.rabi0, qubit.gamma)
    else:
        scale = max(_rwa_amplitude_scale(qubit),
                    abs(qubit.omega_q - pulse.omega0), qubit.gamma)
    if scale <= 0:
        return (t_span[1] - t_span[0]) / 50.0
    return min(1.0 / (20.0 * scale), (t_span[1] - t_span[0]) / 50.0)


def _qubit_h_batch(pulse: PulseParams, qubit, d_arr: np.ndarray,
                   frame: str):
    """Hamiltonian factory for a stack of qubits at positions d_arr."""
    m = len(d_arr)
    detuning = qubit.omega_q - pulse.omega0
    if frame == "rwa":
        def h_func(t):
            omega = rabi_envelope(pulse, qubit, d_arr, t)
            h = np.zeros((m, 2, 2), dtype=complex)
            h[:, 0, 0] = -0.5 * detuning
            h[:, 1, 1] = +0.5 * detuning
            h[:, 1, 0] = 0.5 * omega
            h[:, 0, 1] = 0.5 * np.conj(omega)
            return h
    else:
        emax = pulse_mod.field_max(pulse)
        # the real-field amplitude consistent with the rotating-frame peak:
        # Omega0 for lab-max, 2 Omega0 for rwa-max
        scale = 2.0 * _rwa_amplitude_scale(qubit)

        def h_func(t):
            drive = scale * pulse_mod.field_real(pulse, d_arr, t) / emax
            h = np.zeros((m, 2, 2), dtype=complex)
            h[:, 0, 0] = -0.5 * qubit.omega_q
            h[:, 1, 1] = +0.5 * qubit.omega_q
            h[:, 1, 0] = 0.5 * drive
            h[:, 0, 1] = 0.5 * drive
            return h
    return h_func


def evolve_qubit_batch(pulse: PulseParams, qubit: QubitSpec, d_values,
                       t_span: tuple[float, float], eval_times,
                       cfg: SolverConfig | None = None,
                       rho0: np.ndarray | None = None) -> np.ndarray:
    """Evolve independent qubits at every position in d_values.

    Returns density matrices of shape (T, M, 2, 2) at the requested times.
    """
    cfg = cfg or SolverConfig()
    d_arr = np.atleast_1d(np.asarray(d_values, dtype=float))
    m = len(d_arr)
    if rho0 is None:
        rho0 = np.zeros((m, 2, 2), dtype=complex)
        rho0[:, 0, 0] = 1.0
    h_func = _qubit_h_batch(pulse, qubit, d_arr, cfg.frame)
    collapse = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    max_step = _default_max_step(pulse, qubit, cfg, t_span)
    return evolve_lindblad(h_func, collapse, qubit.gamma, rho0, t_span,
                           eval_times, rtol=cfg.rtol, atol=cfg.atol,
                           max_step=max_step)


def evolve_qubit(pulse: PulseParams, qubit: QubitSpec, d: float,
                 t_span: tuple[float, float],
                 cfg: SolverConfig | None = None,
                 eval_times=None,
                 rho0: np.ndarray | None = None) -> Trajectory:
    """Evolve one qubit at position d; initial state |g><g| by default."""
    if eval_times is None:
        eval_times = np.linspace(t_span[0], t_span[1], 1201)
    rho0_b = None if rho0 is None else np.asarray(rho0, dtype=complex)[None]
    rhos = evolve_qubit_batch(pulse, qubit, [d], t_span, eval_times, cfg,
                              rho0=rho0_b)
    cfg = cfg or SolverConfig()
    return Trajectory(times=np.asarray(eval_times, dtype=float),
                      rhos=rhos[:, 0],
                      meta={"d": d, "frame": cfg.frame, "gamma": qubit.gamma})


def _transmon_ops(n_levels: int):
    b = np.diag(np.sqrt(np.arange(1, n_levels, dtype=float)), k=1)
    return b, b.conj().T


def _transmon_h_batch(pulse: PulseParams, transmon, d_arr: np.ndarray,
                      n_levels: int):
    detuning = transmon.omega_q - pulse.omega0
    n_op = np.arange(n_levels, dtype=float)
    h_static = np.diag(detuning * n_op
                       + 0.5 * transmon.alpha_anh * (n_op**2 - n_op)).astype(complex)
    b, bdag = _transmon_ops(n_levels)

    def h_func(t):
        omega = rabi_envelope(pulse, transmon, d_arr, t)
        return (h_static
                + 0.5 * omega[:, None, None] * bdag
                + 0.5 * np.conj(omega)[:, None, None] * b)
    return h_func


def _evolve_transmon_raw(pulse, transmon, d_arr, t_span, eval_times, cfg,
                         n_levels):
    cfg = cfg or SolverConfig()
    if cfg.frame != "rwa":
        raise ValueError("the lab frame is implemented for the qubit only")
    rho0 = np.zeros((len(d_arr), n_levels, n_levels), dtype=complex)
    rho0[:, 0, 0] = 1.0
    h_func = _transmon_h_batch(pulse, transmon, d_arr, n_levels)
    b, _ = _transmon_ops(n_levels)
    max_step = _default_max_step(pulse, transmon, cfg, t_span)
    return evolve_lindblad(h_func, b, transmon.gamma, rho0, t_span,
                           eval_times, rtol=cfg.rtol, atol=cfg.atol,
                           max_step=max_step)


def evolve_transmon_batch(pulse: PulseParams, transmon: TransmonSpec, d_values,
                          t_span: tuple[float, float], eval_times,
                          cfg: SolverConfig | None = None,
                          auto_converge: bool = True,
                          pop_diff_tol: float = 1e-4,
                          top_pop_tol: float = 1e-6,
                          max_doublings: int = 2):
    """Evolve independent transmons at every position in d_values.

    Starting from ``transmon.n_levels``, the truncation is doubled until the
    populations of the levels shared with the doubled space change by less
    than ``pop_diff_tol`` and the top two levels stay below ``top_pop_tol``
    throughout.  Returns (rhos with the accepted truncation, n_levels, meta).
    """
    d_arr = np.atleast_1d(np.asarray(d_values, dtype=float))
    n = transmon.n_levels
    rhos = _evolve_transmon_raw(pulse, transmon, d_arr, t_span, eval_times,
                                cfg, n)
    if not auto_converge:
        return rhos, n, {"converged": None}
    for _ in range(max_doublings + 1):
        pops = np.real(np.einsum("tmii->tmi", rhos))
        top_ok = float(pops[..., -2:].max()) < top_pop_tol
        rhos2 = _evolve_transmon_raw(pulse, transmon, d_arr, t_span,
                                     eval_times, cfg, 2 * n)
        pops2 = np.real(np.einsum("tmii->tmi", rhos2))
        diff = float(np.max(np.abs(pops2[..., :n] - pops)))
        if top_ok and diff < pop_diff_tol:
            return rhos, n, {"converged": True, "pop_diff": diff,
                             "top_pop": float(pops[..., -2:].max())}
        n, rhos = 2 * n, rhos2
    raise TruncationError(
        f"Fock truncation did not converge by n_levels={n} "
        f"(last population change {diff:.3e})")


def evolve_transmon(pulse: PulseParams, transmon: TransmonSpec, d: float,
                    t_span: tuple[float, float],
                    cfg: SolverConfig | None = None,
                    eval_times=None, auto_converge: bool = True) -> Trajectory:
    """Evolve one transmon at position d; initial state |0><0|."""
    if eval_times is None:
        eval_times = np.linspace(t_span[0], t_span[1], 1201)
    rhos, n_used, meta = evolve_transmon_batch(
        pulse, transmon, [d], t_span, eval_times, cfg,
        auto_converge=auto_converge)
    meta = dict(meta, d=d, n_levels=n_used, gamma=transmon.gamma)
    return Trajectory(times=np.asarray(eval_times, dtype=float),
                      rhos=rhos[:, 0], meta=meta)
