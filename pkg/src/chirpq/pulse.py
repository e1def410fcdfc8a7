"""Closed-form chirped pulses that self-compress in a quadratic band.

The analytic-signal field is

    E+(z, t) = |E+(z, t)| * exp(i theta(z, t)) * exp(i phi) * exp(i (k0 z - omega0 t))

with a Gaussian envelope of time-dependent width sigma(t) centred on
z = v t / eta.  Free evolution in the band omega(k) = omega_c + v^2 k^2 / (2 omega_c)
focuses the envelope to its minimum width sigma_f at time t_f = eta d_f / v
around z = d_f, where the chirp phase theta vanishes identically.

The same field is, exactly, the Gaussian chirped wavenumber superposition

    E+(z, t) = N e^{i phi} / (k_c sqrt(2 pi)) *
               Integral dk exp(-sigma_f^2 (k-k0)^2 / 2 + i d_f (k-k0)^2 / (2 k0))
                           * exp(i (k z - omega(k) t)),

which `spectral_propagation_oracle` evaluates by quadrature as an
independent cross-check of the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .medium import QuadraticBand, omega_quadratic

__all__ = [
    "PulseParams",
    "SpectrumStats",
    "WindowTooShortError",
    "QuadratureResolutionError",
    "pulse_from_ratios",
    "s_function",
    "sigma_t",
    "theta",
    "field_plus",
    "field_real",
    "dtheta_dt",
    "spectrum_at",
    "spectral_propagation_oracle",
]


class WindowTooShortError(ValueError):
    """Sampling window does not contain the pulse passage to the required depth."""


class QuadratureResolutionError(ValueError):
    """Quadrature grid too coarse to resolve the integrand's phase."""


@dataclass(frozen=True)
class PulseParams:
    """Five pulse parameters (k0, d_f, sigma_f, phi, amplitude) on a quadratic band."""

    k0: float
    d_f: float
    sigma_f: float
    phi: float = 0.0
    amplitude: float = 1.0
    band: QuadraticBand = QuadraticBand(1.0, 1.0)

    def __post_init__(self):
        if self.k0 <= 0:
            raise ValueError(f"k0 must be positive, got {self.k0}")
        if self.sigma_f <= 0:
            raise ValueError(f"sigma_f must be positive, got {self.sigma_f}")
        if self.d_f <= 0:
            raise ValueError(f"d_f must be positive, got {self.d_f}")

    @property
    def omega0(self) -> float:
        """Carrier frequency omega(k0)."""
        return omega_quadratic(self.band, self.k0)

    @property
    def k_c(self) -> float:
        return self.band.k_c

    @property
    def eta(self) -> float:
        """k_c / k0."""
        return self.band.k_c / self.k0

    @property
    def t_f(self) -> float:
        """Focusing time eta d_f / v."""
        return self.eta * self.d_f / self.band.v

    @property
    def lambda0(self) -> float:
        """Carrier wavelength 2 pi / k0."""
        return 2.0 * np.pi / self.k0

    @property
    def group_velocity(self) -> float:
        """Envelope-centre speed v / eta (= v^2 k0 / omega_c)."""
        return self.band.v / self.eta


def pulse_from_ratios(omega0_over_omega_c: float, d_f_over_lambda0: float,
                      sigma_f_over_lambda0: float, phi: float = 0.0,
                      amplitude: float = 1.0,
                      band: QuadraticBand | None = None) -> PulseParams:
    """Build PulseParams from the dimensionless ratios used in figure captions."""
    if band is None:
        band = QuadraticBand(1.0, 1.0)
    if omega0_over_omega_c <= 1.0:
        raise ValueError("omega0/omega_c must exceed 1 (carrier above cutoff)")
    omega0 = omega0_over_omega_c * band.omega_c
    k0 = np.sqrt(2.0 * band.omega_c * (omega0 - band.omega_c)) / band.v
    lambda0 = 2.0 * np.pi / k0
    return PulseParams(k0=k0, d_f=d_f_over_lambda0 * lambda0,
                       sigma_f=sigma_f_over_lambda0 * lambda0,
                       phi=phi, amplitude=amplitude, band=band)


def s_function(pulse: PulseParams, z, t):
    """Dimensionless propagation coordinate s(z, t) = eta k_c z - omega_c t."""
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    out = pulse.eta * pulse.k_c * z - pulse.band.omega_c * t
    return out if out.ndim else float(out)


def sigma_t(pulse: PulseParams, t):
    """Envelope width sigma(t) = (sigma_f^4 + s(d_f, t)^2 / k_c^4)^(1/4).

    Minimum sigma_f is attained exactly at t = t_f; symmetric about t_f.
    """
    s_f = s_function(pulse, pulse.d_f, t)
    out = (pulse.sigma_f**4 + s_f**2 / pulse.k_c**4) ** 0.25
    return out if np.ndim(out) else float(out)


def theta(pulse: PulseParams, z, t):
    """Chirp phase; vanishes for all z at the focusing time t_f."""
    s_f = s_function(pulse, pulse.d_f, t)
    s_z = s_function(pulse, z, t)
    sig4 = pulse.sigma_f**4 + s_f**2 / pulse.k_c**4
    out = (-s_f * s_z**2 / (2.0 * pulse.eta**2 * pulse.k_c**4 * sig4)
           + 0.5 * np.arctan(s_f / (pulse.k_c**2 * pulse.sigma_f**2)))
    return out if np.ndim(out) else float(out)


def dtheta_dt(pulse: PulseParams, z, t):
    """Analytic time derivative of the chirp phase.

    Both s(z, t) and s(d_f, t) advance at -omega_c, so

        d theta / dt = omega_c [ (s_z^2 + 2 s_f s_z) / (2 eta^2 k_c^4 sigma^4)
                                 - s_f^2 s_z^2 / (eta^2 k_c^8 sigma^8) ]
                       - (omega_c / 2) k_c^2 sigma_f^2 / (k_c^4 sigma_f^4 + s_f^2).
    """
    wc = pulse.band.omega_c
    kc = pulse.k_c
    s_f = s_function(pulse, pulse.d_f, t)
    s_z = s_function(pulse, z, t)
    sig4 = pulse.sigma_f**4 + s_f**2 / kc**4
    term1 = wc * (s_z**2 + 2.0 * s_f * s_z) / (2.0 * pulse.eta**2 * kc**4 * sig4)
    term2 = -wc * s_f**2 * s_z**2 / (pulse.eta**2 * kc**8 * sig4**2)
    term3 = -0.5 * wc * kc**2 * pulse.sigma_f**2 / (kc**4 * pulse.sigma_f**4 + s_f**2)
    out = term1 + term2 + term3
    return out if np.ndim(out) else float(out)


def envelope_abs(pulse: PulseParams, z, t):
    """Envelope |E+(z, t)| = N / (k_c sigma(t)) exp(-sigma_f^2 (z - v t/eta)^2 / (2 sigma^4))."""
    z = np.asarray(z, dtype=float)
    sig = sigma_t(pulse, t)
    u = z - pulse.group_velocity * np.asarray(t, dtype=float)
    out = (pulse.amplitude / (pulse.k_c * sig)
           * np.exp(-pulse.sigma_f**2 * u**2 / (2.0 * sig**4)))
    return out if np.ndim(out) else float(out)


def field_plus(pulse: PulseParams, z, t):
    """Analytic-signal field E+(z, t)."""
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    phase = (theta(pulse, z, t) + pulse.phi
             + pulse.k0 * z - pulse.omega0 * t)
    out = envelope_abs(pulse, z, t) * np.exp(1j * np.asarray(phase))
    return out if np.ndim(out) else complex(out)


def field_real(pulse: PulseParams, z, t):
    """Real field E(z, t) = 2 Re E+(z, t)."""
    out = 2.0 * np.real(field_plus(pulse, z, t))
    return out if np.ndim(out) else float(out)


def field_max(pulse: PulseParams) -> float:
    """Global maximum of the real field, 2 N / (k_c sigma_f).

    The envelope peaks at (d_f, t_f); the carrier factor is taken at its
    aligned maximum, which is the normalization used for coupling scales.
    """
    return 2.0 * pulse.amplitude / (pulse.k_c * pulse.sigma_f)


@dataclass(frozen=True)
class SpectrumStats:
    """Normalized magnitude spectrum on a frequency grid with its first moments."""

    mean_omega: float
    std_omega: float
    omega: np.ndarray
    p_of_omega: np.ndarray


def spectrum_at(pulse: PulseParams, z: float, time_window: tuple[float, float],
                n_samples: int = 2**14, edge_threshold: float = 1e-8,
                edge_policy: str = "raise") -> SpectrumStats:
    """Magnitude spectrum of the real field at position ``z``.

    The field is sampled uniformly on ``time_window``, transformed with the
    convention Etilde(omega) = (2 pi)^(-1/2) Integral E(t) exp(-i omega t) dt,
    and the density p(omega) = |Etilde| / integral |Etilde| is formed on the
    positive-frequency half-axis; mean and standard deviation are its moments.

    The envelope must have decayed below ``edge_threshold`` times its in-window
    peak at both window ends.  Near a band edge the envelope tails decay only
    algebraically (slow components linger), so deep thresholds may be
    unreachable; ``edge_policy="taper"`` instead applies a cosine taper over
    the outer 10% of the window and proceeds.
    """
    t0, t1 = time_window
    if not t1 > t0:
        raise ValueError("empty time window")
    ts = np.linspace(t0, t1, n_samples, endpoint=False)
    dt = ts[1] - ts[0]
    if dt > 2.0 * np.pi / pulse.omega0 / 16.0:
        raise QuadratureResolutionError(
            f"dt={dt:.3g} gives fewer than 16 samples per carrier period")
    env = envelope_abs(pulse, z, ts)
    peak = float(env.max())
    edge = max(env[0], env[-1]) / peak
    if edge > edge_threshold:
        if edge_policy == "raise":
            raise WindowTooShortError(
                f"envelope at window edges is {edge:.3g} of peak "
                f"(> {edge_threshold:.3g}); enlarge the window or use "
                f"edge_policy='taper'")
        if edge_policy != "taper":
            raise ValueError(f"unknown edge_policy {edge_policy!r}")
    field = field_real(pulse, z, ts)
    if edge > edge_threshold and edge_policy == "taper":
        n_taper = max(2, n_samples // 10)
        ramp = 0.5 * (1.0 - np.cos(np.linspace(0.0, np.pi, n_taper)))
        window = np.ones(n_samples)
        window[:n_taper] = ramp
        window[-n_taper:] = ramp[::-1]
        field = field * window

    spec = np.fft.rfft(field) * dt / np.sqrt(2.0 * np.pi)
    omega = 2.0 * np.pi * np.fft.rfftfreq(n_samples, d=dt)
    mag = np.abs(spec)
    pos = omega > 0.0
    omega = omega[pos]
    mag = mag[pos]
    norm = np.trapezoid(mag, omega)
    p = mag / norm
    mean = float(np.trapezoid(omega * p, omega))
    var = float(np.trapezoid((omega - mean) ** 2 * p, omega))
    return SpectrumStats(mean_omega=mean, std_omega=float(np.sqrt(max(var, 0.0))),
                         omega=omega, p_of_omega=p)


def spectral_propagation_oracle(pulse: PulseParams, z_grid, t: float,
                                k_halfwidth: float = 6.0,
                                n_nodes: int = 4096) -> np.ndarray:
    """Synthesize E+(z, t) by quadrature over the wavenumber superposition.

    Gauss-Legendre quadrature of the Gaussian chirped amplitude over
    k in [k0 - k_halfwidth/sigma_f, k0 + k_halfwidth/sigma_f].  This is an
    independent propagation route used to validate the closed form.
    """
    z_grid = np.atleast_1d(np.asarray(z_grid, dtype=float))
    half = k_halfwidth / pulse.sigma_f
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    k = pulse.k0 + half * nodes
    w = half * weights
    q = k - pulse.k0

    # Resolution guard: phase change between adjacent nodes must stay small.
    omega_k = omega_quadratic(pulse.band, k)
    dphase_dk = (np.max(np.abs(z_grid)) + np.max(np.abs(
        pulse.band.v**2 * k / pulse.band.omega_c)) * abs(t)
        + pulse.d_f * np.max(np.abs(q)) / pulse.k0)
    # Gauss-Legendre with n nodes integrates degree 2n-1 exactly; the phase
    # budget c*half per half-interval must stay below ~2n, i.e. at most
    # 2 pi rad per central node spacing (pi * half / n).
    max_spacing = np.max(np.diff(np.sort(k)))
    if dphase_dk * max_spacing > 2.0 * np.pi:
        raise QuadratureResolutionError(
            f"phase advances {dphase_dk * max_spacing:.3g} rad per node "
            f"spacing; increase n_nodes")

    amp = np.exp(-0.5 * pulse.sigma_f**2 * q**2
                 + 0.5j * pulse.d_f * q**2 / pulse.k0)
    phase = np.exp(1j * (np.outer(z_grid, k) - omega_k * t))
    prefactor = pulse.amplitude * np.exp(1j * pulse.phi) / (
        pulse.k_c * np.sqrt(2.0 * np.pi))
    return prefactor * phase @ (amp * w)
