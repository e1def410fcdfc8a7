import numpy as np
import pytest

from chirpq.medium import QuadraticBand
from chirpq.pulse import (PulseParams, QuadratureResolutionError,
                          WindowTooShortError, dtheta_dt, envelope_abs,
                          field_plus, field_real, pulse_from_ratios,
                          s_function, sigma_t, spectral_propagation_oracle,
                          spectrum_at, theta)


def test_ratio_construction(fig2_pulse):
    p = fig2_pulse
    assert p.k0 == pytest.approx(0.1, rel=1e-12)
    assert p.eta == pytest.approx(10.0, rel=1e-12)
    assert p.lambda0 == pytest.approx(20.0 * np.pi, rel=1e-12)
    assert p.sigma_f == pytest.approx(7.0 * np.pi, rel=1e-12)
    assert p.d_f == pytest.approx(360.0 * np.pi, rel=1e-12)
    assert p.t_f == pytest.approx(3600.0 * np.pi, rel=1e-12)
    assert p.omega0 == pytest.approx(1.005, rel=1e-12)


def test_pulse_validation():
    band = QuadraticBand(1.0, 1.0)
    with pytest.raises(ValueError):
        PulseParams(k0=-0.1, d_f=1.0, sigma_f=1.0, band=band)
    with pytest.raises(ValueError):
        pulse_from_ratios(0.9, 10.0, 0.35)


def test_s_function(fig2_pulse):
    p = fig2_pulse
    assert s_function(p, p.d_f, p.t_f) == pytest.approx(0.0, abs=1e-9)
    # eta k_c z at t = 0 with the Fig-2 geometry: 10 * 360 pi
    assert s_function(p, p.d_f, 0.0) == pytest.approx(3600.0 * np.pi, rel=1e-12)
    assert s_function(p, 0.0, 1.0) == pytest.approx(-p.band.omega_c, rel=1e-12)


def test_sigma_t(fig2_pulse):
    p = fig2_pulse
    assert sigma_t(p, p.t_f) == pytest.approx(p.sigma_f, rel=1e-14)
    # direct evaluation of the width at t = 0
    expected = (p.sigma_f**4 + (p.eta * p.k_c * p.d_f)**2 / p.k_c**4) ** 0.25
    assert sigma_t(p, 0.0) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(106.396, abs=2e-3)
    taus = np.linspace(0.0, 2.5 * p.t_f, 31)
    np.testing.assert_allclose(sigma_t(p, p.t_f - taus), sigma_t(p, p.t_f + taus),
                               rtol=1e-14)
    assert np.all(sigma_t(p, taus) >= p.sigma_f)


def test_theta_focus_and_center_line(fig2_pulse):
    p = fig2_pulse
    zs = np.linspace(-3 * p.lambda0, p.d_f + 5 * p.lambda0, 57)
    np.testing.assert_allclose(theta(p, zs, p.t_f), 0.0, atol=1e-12)
    # on the envelope-centre line only the arctan term survives
    for t in [0.3 * p.t_f, 0.8 * p.t_f, 1.7 * p.t_f]:
        z_c = p.group_velocity * t
        expected = 0.5 * np.arctan(
            s_function(p, p.d_f, t) / (p.k_c**2 * p.sigma_f**2))
        assert theta(p, z_c, t) == pytest.approx(expected, rel=1e-12)


def test_theta_full_value_double_entry(fig2_pulse):
    # independent term-by-term evaluation at (z, t) = (0, 0)
    p = fig2_pulse
    s_f = p.eta * p.k_c * p.d_f
    s_z = 0.0
    sig4 = p.sigma_f**4 + s_f**2 / p.k_c**4
    expected = (-s_f * s_z**2 / (2 * p.eta**2 * p.k_c**4 * sig4)
                + 0.5 * np.arctan(s_f / (p.k_c**2 * p.sigma_f**2)))
    assert theta(p, 0.0, 0.0) == pytest.approx(expected, rel=1e-14)
    # and at a generic off-centre point
    z, t = 123.4, 4567.8
    s_f = s_function(p, p.d_f, t)
    s_z = s_function(p, z, t)
    sig4 = p.sigma_f**4 + s_f**2 / p.k_c**4
    expected = (-s_f * s_z**2 / (2 * p.eta**2 * p.k_c**4 * sig4)
                + 0.5 * np.arctan(s_f / (p.k_c**2 * p.sigma_f**2)))
    assert theta(p, z, t) == pytest.approx(expected, rel=1e-14)


def test_dtheta_dt_finite_difference(fig2_pulse):
    p = fig2_pulse
    # spec-step check near the envelope, where |theta| is moderate and the
    # difference quotient is not roundoff-limited
    h = 1e-6 / p.band.omega_c
    for t_rel in [0.3, 0.8, 1.0, 1.6]:
        t = t_rel * p.t_f
        z = p.group_velocity * t + 0.7 * sigma_t(p, t)**2 / p.sigma_f
        fd = (theta(p, z, t + h) - theta(p, z, t - h)) / (2 * h)
        assert dtheta_dt(p, z, t) == pytest.approx(fd, rel=1e-6)
    # broad sweep with a step large enough that float cancellation in theta
    # (tens of radians far off-centre) stays below the tolerance
    h = 1e-4 / p.band.omega_c
    rng = np.random.default_rng(7)
    for _ in range(25):
        z = rng.uniform(-2 * p.lambda0, p.d_f + 4 * p.lambda0)
        t = rng.uniform(0.0, 2.5 * p.t_f)
        fd = (theta(p, z, t + h) - theta(p, z, t - h)) / (2 * h)
        assert dtheta_dt(p, z, t) == pytest.approx(fd, rel=1e-6, abs=1e-12)
    # at the focus instant
    h = 1e-6 / p.band.omega_c
    fd = (theta(p, p.d_f, p.t_f + h) - theta(p, p.d_f, p.t_f - h)) / (2 * h)
    assert dtheta_dt(p, p.d_f, p.t_f) == pytest.approx(fd, rel=1e-6)


def test_dtheta_dt_even_about_focus(fig2_pulse):
    # theta(d_f, .) is odd about t_f, so its time derivative is even
    # (and in particular nonzero at t_f: -omega_c / (2 sigma_f^2)).
    p = fig2_pulse
    taus = np.linspace(10.0, 900.0, 13)
    plus = dtheta_dt(p, p.d_f, p.t_f + taus)
    minus = dtheta_dt(p, p.d_f, p.t_f - taus)
    np.testing.assert_allclose(plus, minus, rtol=1e-10)
    th_plus = theta(p, p.d_f, p.t_f + taus)
    th_minus = theta(p, p.d_f, p.t_f - taus)
    np.testing.assert_allclose(th_plus, -th_minus, rtol=1e-10)
    assert dtheta_dt(p, p.d_f, p.t_f) == pytest.approx(
        -p.band.omega_c / (2.0 * p.sigma_f**2), rel=1e-12)


def test_field_amplitudes(fig2_pulse):
    p = fig2_pulse
    peak = p.amplitude / (p.k_c * p.sigma_f)
    assert abs(field_plus(p, p.d_f, p.t_f)) == pytest.approx(peak, rel=1e-12)
    # Gaussian substitution: 3-sigma offset at focus gives e^{-9/2}
    off = 3.0 * p.sigma_f * sigma_t(p, p.t_f)**2 / p.sigma_f**2
    assert abs(field_plus(p, p.d_f + off, p.t_f)) == pytest.approx(
        peak * np.exp(-4.5), rel=1e-12)
    assert abs(field_plus(p, p.d_f - off, p.t_f)) == pytest.approx(
        peak * np.exp(-4.5), rel=1e-12)
    # modulus at the envelope centre is N / (k_c sigma(t))
    for t in [0.0, 0.4 * p.t_f, 1.9 * p.t_f]:
        z_c = p.group_velocity * t
        assert abs(field_plus(p, z_c, t)) == pytest.approx(
            p.amplitude / (p.k_c * sigma_t(p, t)), rel=1e-12)
    assert field_real(p, p.d_f, p.t_f) == pytest.approx(
        2.0 * np.real(field_plus(p, p.d_f, p.t_f)), rel=1e-14)


def test_focus_is_global_argmax(fig2_pulse):
    p = fig2_pulse
    zs = np.linspace(p.d_f - 20 * p.sigma_f, p.d_f + 20 * p.sigma_f, 4001)
    amps = np.abs(field_plus(p, zs, p.t_f))
    assert zs[np.argmax(amps)] == pytest.approx(p.d_f, abs=p.sigma_f / 50)


def test_spectral_propagation_oracle_matches(fig2_pulse):
    p = fig2_pulse
    for t in [0.0, 0.5 * p.t_f, p.t_f, 2.0 * p.t_f]:
        z_c = p.group_velocity * t
        width = sigma_t(p, t)**2 / p.sigma_f
        zs = np.linspace(z_c - 6 * width, z_c + 6 * width, 900)
        oracle = spectral_propagation_oracle(p, zs, t)
        closed = field_plus(p, zs, t)
        err = np.linalg.norm(oracle - closed) / np.linalg.norm(closed)
        assert err < 1e-6
    # peak sits at d_f at the focusing time
    zs = np.linspace(p.d_f - 3 * p.sigma_f, p.d_f + 3 * p.sigma_f, 601)
    oracle = np.abs(spectral_propagation_oracle(p, zs, p.t_f))
    assert zs[np.argmax(oracle)] == pytest.approx(p.d_f, abs=p.sigma_f / 30)


def test_spectral_oracle_resolution_guard(fig2_pulse):
    p = fig2_pulse
    with pytest.raises(QuadratureResolutionError):
        spectral_propagation_oracle(p, [p.d_f], 2.0 * p.t_f, n_nodes=64)


def test_pde_residual(fig2_pulse):
    # i dE/dt = omega_c E - (v^2 / 2 omega_c) d^2E/dz^2 under 4th-order stencils
    p = fig2_pulse
    wc, v = p.band.omega_c, p.band.v
    t0 = 0.7 * p.t_f
    z0 = p.group_velocity * t0
    ht = 0.1  # 4th-order truncation ~ (omega0 ht)^4 must sit below 1e-4
    zz = np.linspace(z0 - 30, z0 + 30, 241)
    # time derivative on the z line
    fm2, fm1, fp1, fp2 = (field_plus(p, zz, t) for t in
                          (t0 - 2 * ht, t0 - ht, t0 + ht, t0 + 2 * ht))
    dt_e = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * ht)
    f0 = field_plus(p, zz, t0)
    d2z = (-np.roll(f0, 2) + 16 * np.roll(f0, 1) - 30 * f0
           + 16 * np.roll(f0, -1) - np.roll(f0, -2)) / (12 * (zz[1] - zz[0])**2)
    interior = slice(2, -2)
    residual = (1j * dt_e - wc * f0 + (v**2 / (2 * wc)) * d2z)[interior]
    scale = np.max(np.abs(wc * f0))
    assert np.max(np.abs(residual)) / scale < 1e-4


def test_norm_conservation(fig2_pulse):
    p = fig2_pulse
    norms = []
    for t in [0.0, 0.5 * p.t_f, p.t_f, 1.5 * p.t_f, 2.0 * p.t_f]:
        z_c = p.group_velocity * t
        width = sigma_t(p, t)**2 / p.sigma_f
        zs = np.linspace(z_c - 10 * width, z_c + 10 * width, 20001)
        amp2 = np.abs(field_plus(p, zs, t))**2
        norms.append(np.trapezoid(amp2, zs))
    norms = np.array(norms)
    assert np.max(np.abs(norms / norms[0] - 1.0)) < 1e-8
    # analytic value N^2 sqrt(pi) / (k_c^2 sigma_f)
    expected = p.amplitude**2 * np.sqrt(np.pi) / (p.k_c**2 * p.sigma_f)
    assert norms[0] == pytest.approx(expected, rel=1e-8)


def test_chirp_sign_flip(fig2_pulse):
    # spatial gradient of the local wavenumber changes sign across t_f
    p = fig2_pulse
    dz = 0.05

    def k_inst_slope(t):
        z_c = p.group_velocity * t
        zs = z_c + np.array([-dz, 0.0, dz])
        k_inst = p.k0 + (theta(p, zs + dz / 2, t) - theta(p, zs - dz / 2, t)) / dz
        return (k_inst[2] - k_inst[0]) / (2 * dz)

    before = k_inst_slope(0.5 * p.t_f)
    after = k_inst_slope(1.5 * p.t_f)
    assert before < 0 < after  # down-chirp turns into up-chirp


# ----------------------------------------------------------------- spectrum

def _spectrum_moments_oracle(p, n=400_000):
    """Closed-form magnitude spectrum: |E~(0, omega)| ~ |A(k(omega))| dk/domega."""
    wc, v = p.band.omega_c, p.band.v
    omega = np.linspace(wc + 1e-9, 3.0, n)
    k = np.sqrt(2.0 * wc * (omega - wc)) / v
    amp = np.exp(-0.5 * p.sigma_f**2 * (k - p.k0) ** 2)
    dk_domega = wc / (v**2 * k)
    mag = amp * dk_domega
    # the reflected branch k -> -k contributes at the same omega
    mag = mag + np.exp(-0.5 * p.sigma_f**2 * (k + p.k0) ** 2) * dk_domega
    norm = np.trapezoid(mag, omega)
    pw = mag / norm
    mean = np.trapezoid(omega * pw, omega)
    std = np.sqrt(np.trapezoid((omega - mean) ** 2 * pw, omega))
    return mean, std


def test_spectrum_against_closed_form_oracle():
    p = pulse_from_ratios(1.005, 7.5, 0.35)
    stats = spectrum_at(p, 0.0, (-14.0 * p.t_f, 14.0 * p.t_f),
                        n_samples=2**19, edge_threshold=1e-3,
                        edge_policy="taper")
    mean_o, std_o = _spectrum_moments_oracle(p)
    assert stats.mean_omega == pytest.approx(mean_o, rel=2e-2)
    assert stats.std_omega == pytest.approx(std_o, rel=8e-2)
    # density is normalized on its grid
    assert np.trapezoid(stats.p_of_omega, stats.omega) == pytest.approx(1.0,
                                                                        rel=1e-9)
    assert np.all(stats.p_of_omega >= 0.0)


def test_spectrum_narrowband_limit():
    p = pulse_from_ratios(1.005, 5.0, 4.0)
    stats = spectrum_at(p, 0.0, (-8.0 * p.t_f, 8.0 * p.t_f),
                        n_samples=2**17, edge_threshold=1e-3,
                        edge_policy="taper")
    assert stats.mean_omega == pytest.approx(p.omega0, rel=2e-3)
    assert stats.std_omega < 0.02 * p.omega0


def test_spectrum_window_diagnostics(fig2_pulse):
    p = fig2_pulse
    with pytest.raises(WindowTooShortError):
        spectrum_at(p, 0.0, (-2.0 * p.t_f, 2.0 * p.t_f), n_samples=2**17)
    with pytest.raises(QuadratureResolutionError):
        spectrum_at(p, 0.0, (-10.0 * p.t_f, 10.0 * p.t_f), n_samples=2**8,
                    edge_policy="taper", edge_threshold=1e-3)
