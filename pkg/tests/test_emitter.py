import numpy as np
import pytest

from chirpq.emitter import (QubitSpec, SolverConfig, TransmonSpec,
                            evolve_qubit, evolve_transmon, populations_at,
                            rabi_envelope)
from chirpq.lindblad import check_density_matrix, evolve_lindblad
from chirpq.pulse import sigma_t


def _qubit(pulse, rabi0=0.038, gamma=None, convention="lab-max"):
    gamma = 1e-6 * pulse.omega0 if gamma is None else gamma
    return QubitSpec(omega_q=pulse.omega0, gamma=gamma, rabi0=rabi0,
                     convention=convention)


def test_spec_validation():
    with pytest.raises(ValueError):
        QubitSpec(omega_q=1.0, gamma=-1e-6, rabi0=0.038)
    with pytest.raises(ValueError):
        QubitSpec(omega_q=1.0, gamma=0.0, rabi0=0.038, convention="peak")
    with pytest.raises(ValueError):
        TransmonSpec(omega_q=1.0, alpha_anh=-0.05, gamma=0.0, rabi0=0.038,
                     n_levels=2)
    with pytest.raises(ValueError):
        SolverConfig(frame="interaction")


def test_rabi_envelope_peak_and_conventions(fig2_pulse):
    p = fig2_pulse
    lab = _qubit(p, convention="lab-max")
    rwa = _qubit(p, convention="rwa-max")
    peak_lab = rabi_envelope(p, lab, p.d_f, p.t_f)
    assert abs(peak_lab) == pytest.approx(0.038 / 2.0, rel=1e-12)
    assert np.angle(peak_lab) == pytest.approx(
        np.angle(np.exp(1j * p.k0 * p.d_f)), rel=1e-9)
    peak_rwa = rabi_envelope(p, rwa, p.d_f, p.t_f)
    assert abs(peak_rwa) == pytest.approx(0.038, rel=1e-12)
    # the focus instant maximizes the envelope over time at d_f
    ts = np.linspace(0.0, 2.0 * p.t_f, 4001)
    mags = np.abs(rabi_envelope(p, lab, p.d_f, ts))
    assert mags.max() <= abs(peak_lab) * (1.0 + 1e-12)
    # Gaussian substitution in the envelope
    t = 0.8 * p.t_f
    sig = sigma_t(p, t)
    d = p.group_velocity * t + 3.0 * sig**2 / p.sigma_f
    expected = abs(peak_lab) * (p.sigma_f / sig) * np.exp(-4.5)
    assert abs(rabi_envelope(p, lab, d, t)) == pytest.approx(expected, rel=1e-12)
    # decay far from passage
    assert abs(rabi_envelope(p, lab, p.d_f, 6.0 * p.t_f)) < 0.15 * abs(peak_lab)


def test_constant_drive_rabi_oracle():
    # resonant constant drive: p_e(t) = sin^2(g t / 2); solver vs closed form
    g = 0.17
    h = np.array([[0.0, g / 2.0], [g / 2.0, 0.0]], dtype=complex)
    rho0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    times = np.linspace(0.0, 60.0, 241)
    rhos = evolve_lindblad(lambda t: h, np.zeros((2, 2)), 0.0, rho0,
                           (0.0, times[-1]), times, rtol=1e-10, atol=1e-12,
                           max_step=0.5)
    p_e = np.real(rhos[:, 1, 1])
    np.testing.assert_allclose(p_e, np.sin(g * times / 2.0) ** 2, atol=1e-6)


def test_zero_drive_stays_ground(small_pulse):
    p = small_pulse
    q = QubitSpec(omega_q=p.omega0, gamma=1e-6 * p.omega0, rabi0=0.0)
    traj = evolve_qubit(p, q, p.d_f, (0.0, 2.0 * p.t_f))
    np.testing.assert_allclose(traj.p_g, 1.0, atol=1e-12)


def test_trajectory_invariants_and_purity(small_pulse):
    p = small_pulse
    q = _qubit(p, gamma=0.0, convention="rwa-max")
    traj = evolve_qubit(p, q, p.d_f, (0.0, 2.5 * p.t_f))
    traj.check()  # Hermitian 1e-12, trace 1e-10, psd -1e-10
    purity = np.real(np.einsum("tij,tji->t", traj.rhos, traj.rhos))
    np.testing.assert_allclose(purity, 1.0, atol=1e-8)
    # dissipative run keeps the invariants as well
    q2 = _qubit(p, gamma=1e-5 * p.omega0, convention="rwa-max")
    traj2 = evolve_qubit(p, q2, p.d_f, (0.0, 2.5 * p.t_f))
    traj2.check()
    purity2 = np.real(np.einsum("tij,tji->t", traj2.rhos, traj2.rhos))
    assert purity2.min() < 1.0 - 1e-6


def test_populations_at(small_pulse):
    p = small_pulse
    q = _qubit(p, convention="rwa-max")
    traj = evolve_qubit(p, q, p.d_f, (0.0, 2.0 * p.t_f))
    assert populations_at(traj, 0.0)[0] == pytest.approx(1.0, abs=1e-12)
    sums = traj.populations.sum(axis=1)
    np.testing.assert_allclose(sums, 1.0, atol=1e-8)
    # interpolation stays within the bracketing samples
    t_mid = 0.5 * (traj.times[700] + traj.times[701])
    vals = populations_at(traj, t_mid)
    for level in range(2):
        lo = min(traj.populations[700, level], traj.populations[701, level])
        hi = max(traj.populations[700, level], traj.populations[701, level])
        assert lo - 1e-15 <= vals[level] <= hi + 1e-15
    with pytest.raises(ValueError):
        populations_at(traj, -1.0)
    with pytest.raises(ValueError):
        populations_at(traj, traj.times[-1] + 1.0)


def test_check_density_matrix_rejects_bad_states():
    bad_trace = np.eye(2, dtype=complex) * 0.6
    with pytest.raises(ValueError):
        check_density_matrix(bad_trace)
    non_herm = np.array([[0.5, 0.1j], [0.2j, 0.5]])
    with pytest.raises(ValueError):
        check_density_matrix(non_herm)
    neg = np.array([[1.2, 0.0], [0.0, -0.2]], dtype=complex)
    with pytest.raises(ValueError):
        check_density_matrix(neg)


def test_transmon_zero_drive(small_pulse):
    p = small_pulse
    tm = TransmonSpec(omega_q=p.omega0, alpha_anh=-0.05 * p.omega0,
                      gamma=1e-6 * p.omega0, rabi0=0.0, n_levels=4)
    traj = evolve_transmon(p, tm, p.d_f, (0.0, 1.5 * p.t_f),
                           auto_converge=False)
    np.testing.assert_allclose(traj.p_n(0), 1.0, atol=1e-12)


def test_transmon_hard_anharmonicity_matches_qubit(small_pulse):
    # a very anharmonic oscillator driven on the 0-1 line behaves as a qubit
    p = small_pulse
    q = _qubit(p, rabi0=0.02, gamma=0.0, convention="rwa-max")
    tm = TransmonSpec(omega_q=p.omega0, alpha_anh=-40.0 * p.omega0, gamma=0.0,
                      rabi0=0.02, n_levels=4, convention="rwa-max")
    span = (0.0, 2.2 * p.t_f)
    tq = evolve_qubit(p, q, p.d_f, span)
    tt = evolve_transmon(p, tm, p.d_f, span, auto_converge=False)
    assert np.max(np.abs(tt.p_n(1) - tq.p_e)) < 5e-3
    assert np.max(tt.p_n(2)) < 1e-3


def test_transmon_truncation_metadata(small_pulse):
    p = small_pulse
    tm = TransmonSpec(omega_q=p.omega0, alpha_anh=-0.05 * p.omega0,
                      gamma=1e-6 * p.omega0, rabi0=0.038, n_levels=6,
                      convention="rwa-max")
    traj = evolve_transmon(p, tm, p.d_f, (0.0, 2.2 * p.t_f))
    assert traj.meta["converged"] is True
    assert traj.meta["pop_diff"] < 1e-4
    assert traj.meta["top_pop"] < 1e-6
    traj.check()


def test_lab_frame_rejected_for_transmon(small_pulse):
    p = small_pulse
    tm = TransmonSpec(omega_q=p.omega0, alpha_anh=-0.05 * p.omega0,
                      gamma=0.0, rabi0=0.01)
    with pytest.raises(ValueError):
        evolve_transmon(p, tm, p.d_f, (0.0, p.t_f),
                        cfg=SolverConfig(frame="lab"))
