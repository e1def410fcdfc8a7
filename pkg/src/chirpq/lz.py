"""Landau-Zener view of the driven qubit.

Writing the rotating-frame Rabi amplitude as Omega(d, t) = g exp(i varphi)
and following the phase with one more frame rotation leaves

    H / hbar = Delta(d, t) sigma_z + (g(d, t) / 2) (sigma_+ + sigma_-),

an avoided crossing with gap g at Delta = 0.  For omega_q = omega0 the
detuning is half the chirp-phase velocity, Delta = (d theta / d t) / 2; a
qubit detuning adds (omega_q - omega0) / 2.

The coupling g(d, t) opens and closes in time as the pulse passes; the
addressing resolution sigma_q = d2 - d1 is read off from the positions where
the opening (closing) edge of the coupling window coincides with the zero
crossing of the detuning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import emitter as emitter_mod
from . import pulse as pulse_mod
from .pulse import PulseParams

__all__ = [
    "GapWindow",
    "SigmaQEstimate",
    "RegimeError",
    "FlatCouplingError",
    "lz_decompose",
    "dressed_energies",
    "gap_window",
    "interaction_time",
    "sigma_q_estimate",
    "SIGMA_Q_HALF_LEVEL",
]

# Coupling-window level used by the sigma_q construction: half maximum of the
# squared coupling (g = g_max / sqrt(2)).  With the plain amplitude half
# maximum the coincidence construction lands at sigma_q / sigma_f ~ 3, not at
# the numerically verified ~1.34; the intensity FWHM reproduces it.
SIGMA_Q_HALF_LEVEL = 2.0 ** -0.5


class RegimeError(ValueError):
    """Pulse parameters outside the validity regime of a closed formula."""


class FlatCouplingError(RuntimeError):
    """Coupling is flat/negligible at this position; no window is defined."""


@dataclass(frozen=True)
class GapWindow:
    """Interval where the coupling exceeds ``level`` times its local peak."""

    t_open: float
    t_close: float
    zero_crossings: tuple[float, ...]
    level: float

    def __post_init__(self):
        if not self.t_open < self.t_close:
            raise ValueError("t_open must precede t_close")

    @property
    def length(self) -> float:
        return self.t_close - self.t_open

    @property
    def inside_crossings(self) -> tuple[float, ...]:
        """Detuning zeros that fall strictly inside [t_open, t_close]."""
        return tuple(t for t in self.zero_crossings
                     if self.t_open <= t <= self.t_close)


@dataclass(frozen=True)
class SigmaQEstimate:
    """Addressing-resolution estimate from the coincidence construction."""

    d1: float
    d2: float
    sigma_q: float
    ratio: float  # sigma_q / sigma_f


def lz_decompose(pulse: PulseParams, qubit, d, t):
    """Coupling magnitude g, phase varphi and detuning Delta at (d, t).

    g e^{i varphi} reconstructs the rotating-frame Rabi amplitude; Delta is
    computed from the analytic chirp-phase derivative plus the static qubit
    detuning (omega_q - omega0) / 2.
    """
    omega = emitter_mod.rabi_envelope(pulse, qubit, d, t)
    g = np.abs(omega)
    varphi = np.angle(omega)
    delta = (0.5 * pulse_mod.dtheta_dt(pulse, d, t)
             + 0.5 * (qubit.omega_q - pulse.omega0))
    return g, varphi, delta


def dressed_energies(delta, g):
    """Instantaneous dressed energies (-sqrt(Delta^2 + g^2/4), +sqrt(...)).

    The gap at Delta = 0 equals g; for g = 0 the energies reduce to the bare
    +-|Delta|.
    """
    delta = np.asarray(delta, dtype=float)
    g = np.asarray(g, dtype=float)
    e = np.hypot(delta, 0.5 * g)
    return -e, e


def _coupling_mag(pulse: PulseParams, qubit, d: float, t):
    return np.abs(emitter_mod.rabi_envelope(pulse, qubit, d, t))


def _passage_time(pulse: PulseParams, d: float) -> float:
    """Time at which the envelope centre crosses position d."""
    return d / pulse.group_velocity


def gap_window(pulse: PulseParams, qubit, d: float, level: float = 0.5,
               n_scan: int = 4001) -> GapWindow:
    """Coupling window at position d: outermost crossings of g = level * max g.

    The default level 1/2 gives the FWHM of the coupling magnitude.  Zero
    crossings of the detuning are located by bracketed root finding on the
    window extended by 50% on each side.
    """
    if not 0 < level < 1:
        raise ValueError("level must be in (0, 1)")
    t_pass = _passage_time(pulse, d)
    # local width of the coupling in time, from the envelope width at passage
    sig2 = pulse_mod.sigma_t(pulse, t_pass) ** 2
    tau_half = pulse.eta * sig2 * np.sqrt(2.0 * np.log(2.0)) / (
        pulse.band.v * pulse.sigma_f)
    half_span = 10.0 * tau_half
    ts = np.linspace(t_pass - half_span, t_pass + half_span, n_scan)
    g = _coupling_mag(pulse, qubit, d, ts)
    g_max = float(g.max())
    if g_max <= 0 or not np.isfinite(g_max):
        raise FlatCouplingError(f"coupling vanishes near d={d}")
    if g[0] > 0.9 * g_max or g[-1] > 0.9 * g_max:
        raise FlatCouplingError(
            f"coupling has no isolated peak near d={d} in the scanned span")
    thresh = level * g_max

    def g_rel(t):
        return _coupling_mag(pulse, qubit, d, t) - thresh

    above = np.nonzero(g >= thresh)[0]
    i_lo, i_hi = above[0], above[-1]
    if i_lo == 0 or i_hi == n_scan - 1:
        raise FlatCouplingError(f"half-level crossings not bracketed at d={d}")
    t_open = optimize.brentq(g_rel, ts[i_lo - 1], ts[i_lo], xtol=1e-9 * tau_half)
    t_close = optimize.brentq(g_rel, ts[i_hi], ts[i_hi + 1], xtol=1e-9 * tau_half)

    width = t_close - t_open
    lo, hi = t_open - 0.5 * width, t_close + 0.5 * width
    tz = np.linspace(lo, hi, n_scan)

    def delta_of_t(t):
        return lz_decompose(pulse, qubit, d, t)[2]

    dz = delta_of_t(tz)
    crossings = []
    sign_change = np.nonzero(np.sign(dz[:-1]) * np.sign(dz[1:]) < 0)[0]
    for i in sign_change:
        crossings.append(optimize.brentq(delta_of_t, tz[i], tz[i + 1],
                                         xtol=1e-9 * tau_half))
    return GapWindow(t_open=t_open, t_close=t_close,
                     zero_crossings=tuple(crossings), level=level)


def interaction_time(pulse: PulseParams) -> float:
    """Interaction-time estimate at the focus,

        Delta tau = 4 eta sigma_f sqrt(2 ln 2)
                    / (c sqrt(1 - 2 eta^2 ln 2 / (k_c^2 sigma_f^2))).

    Raises RegimeError when the square root's argument is not positive
    (pulse too narrow for the estimate).
    """
    ln2 = np.log(2.0)
    arg = 1.0 - 2.0 * pulse.eta**2 * ln2 / (pulse.k_c**2 * pulse.sigma_f**2)
    if arg <= 0:
        raise RegimeError(
            f"1 - 2 eta^2 ln2 / (k_c sigma_f)^2 = {arg:.3g} <= 0; "
            "interaction-time formula not applicable")
    return float(4.0 * pulse.eta * pulse.sigma_f * np.sqrt(2.0 * ln2)
                 / (pulse.band.v * np.sqrt(arg)))


def _coincidence_gap(pulse, qubit, d, side: str, level: float) -> float:
    """Signed time between the relevant detuning zero and the window edge.

    side="late" compares the latest zero crossing with t_close (used left of
    the focus), side="early" the earliest crossing with t_open (right of the
    focus).  Positive means the crossing is still inside the window.
    """
    win = gap_window(pulse, qubit, d, level=level)
    if not win.zero_crossings:
        raise FlatCouplingError(f"no detuning zero crossing near d={d}")
    if side == "late":
        return win.t_close - max(win.zero_crossings)
    return min(win.zero_crossings) - win.t_open


def sigma_q_estimate(pulse: PulseParams, qubit,
                     level: float = SIGMA_Q_HALF_LEVEL,
                     d_halfspan_sigmas: float = 4.0,
                     n_probe: int = 33) -> SigmaQEstimate:
    """Addressing resolution sigma_q = d2 - d1 from the coincidence construction.

    d1 < d_f is the position where the gap-closing edge coincides with the
    detuning zero crossing; d2 > d_f pairs the gap-opening edge with it.  Both
    are located by bracketing the sign change of the coincidence gap over
    d in [d_f - span, d_f + span] and refining with a bracketed root find to
    1e-3 sigma_f.
    """
    sf = pulse.sigma_f
    span = d_halfspan_sigmas * sf

    def locate(side: str, direction: int) -> float:
        ds = pulse.d_f + direction * np.linspace(0.0, span, n_probe)[1:]
        prev_d = pulse.d_f
        prev_val = _coincidence_gap(pulse, qubit, prev_d, side, level)
        for d in ds:
            val = _coincidence_gap(pulse, qubit, d, side, level)
            if prev_val == 0.0:
                return prev_d
            if prev_val * val < 0:
                return optimize.brentq(
                    lambda x: _coincidence_gap(pulse, qubit, x, side, level),
                    min(prev_d, d), max(prev_d, d), xtol=1e-3 * sf)
            prev_d, prev_val = d, val
        raise FlatCouplingError(
            f"coincidence ({side}) not found within "
            f"[{pulse.d_f - span:.6g}, {pulse.d_f + span:.6g}]")

    d1 = locate("late", -1)
    d2 = locate("early", +1)
    sigma_q = d2 - d1
    return SigmaQEstimate(d1=d1, d2=d2, sigma_q=sigma_q, ratio=sigma_q / sf)
