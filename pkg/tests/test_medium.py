import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from chirpq.medium import (BelowCutoffError, CrystalParams, QuadraticBand,
                           WaveguideGeometry, bessel_root, crystal_alpha,
                           crystal_band2_fit, crystal_bands,
                           crystal_envelope_validity, k_of_omega,
                           mode_constant, omega_quadratic,
                           quadratic_band_from_waveguide, quadratic_validity,
                           waveguide_dispersion)

FIG_S1 = CrystalParams(c1=1.0, c2=0.3, b=0.5, a=1.0)


# ------------------------------------------------------------ quadratic band

def test_omega_quadratic_examples():
    band = QuadraticBand(1.0, 1.0)
    assert omega_quadratic(band, 0.0) == 1.0
    assert omega_quadratic(band, 0.1) == pytest.approx(1.005, abs=1e-15)
    assert omega_quadratic(band, -0.1) == omega_quadratic(band, 0.1)


def test_k_of_omega_examples():
    band = QuadraticBand(1.0, 1.0)
    assert k_of_omega(band, 1.0) == 0.0
    assert k_of_omega(band, 1.005) == pytest.approx(0.1, rel=1e-12)
    with pytest.raises(BelowCutoffError):
        k_of_omega(band, 0.9)


@given(omega_c=st.floats(0.1, 10.0), v=st.floats(0.1, 10.0),
       omega_rel=st.floats(0.0, 50.0))
@settings(max_examples=200, deadline=None)
def test_k_of_omega_roundtrip(omega_c, v, omega_rel):
    band = QuadraticBand(omega_c, v)
    omega = omega_c * (1.0 + omega_rel)
    k = k_of_omega(band, omega)
    assert k >= 0
    assert omega_quadratic(band, k) == pytest.approx(omega, rel=1e-12)


def test_band_validation():
    with pytest.raises(ValueError):
        QuadraticBand(-1.0, 1.0)
    with pytest.raises(ValueError):
        QuadraticBand(1.0, 0.0)


# ------------------------------------------------------------- Bessel roots

def test_bessel_root_reference_values():
    # 12-digit references for the cutoff-defining roots
    assert bessel_root("jn", 0, 1) == pytest.approx(2.404825557695773, abs=1e-12)
    assert bessel_root("jn", 1, 1) == pytest.approx(3.831705970207512, abs=1e-12)
    assert bessel_root("jn-derivative", 1, 1) == pytest.approx(
        1.841183781340659, abs=1e-12)


def test_bessel_root_residuals_and_ordering():
    for n in range(3):
        roots = [bessel_root("jn", n, m) for m in range(1, 6)]
        for r in roots:
            assert abs(special.jv(n, r)) < 1e-12
        assert np.all(np.diff(roots) > 0)
        droots = [bessel_root("jn-derivative", n, m) for m in range(1, 6)]
        for r in droots:
            assert abs(special.jvp(n, r)) < 1e-12
        assert np.all(np.diff(droots) > 0)


def test_bessel_root_interlacing():
    # adjacent-order zeros interlace; the TE11 cutoff lies below TM01
    assert bessel_root("jn", 0, 1) < bessel_root("jn", 1, 1) < bessel_root("jn", 0, 2)
    assert bessel_root("jn-derivative", 1, 1) < bessel_root("jn", 0, 1)


def test_bessel_root_errors():
    with pytest.raises(ValueError):
        bessel_root("jn", 0, 0)
    with pytest.raises(ValueError):
        bessel_root("nope", 0, 1)


# ------------------------------------------------------ waveguide dispersion

def test_waveguide_dispersion_examples():
    geom = WaveguideGeometry(radius=1.0, c=1.0)
    p01 = 2.404825557695773
    assert waveguide_dispersion(geom, "TM", 0, 1, 0.0) == pytest.approx(p01, abs=1e-12)
    assert waveguide_dispersion(geom, "TM", 0, 1, 0.1) == pytest.approx(
        np.sqrt(p01**2 + 0.01), rel=1e-12)
    assert waveguide_dispersion(geom, "TM", 1, 1, 0.0) == pytest.approx(
        3.831705970207512, abs=1e-12)


def test_quadratic_band_from_waveguide_scaling():
    b1 = quadratic_band_from_waveguide(WaveguideGeometry(1.0, 1.0))
    assert b1.omega_c == pytest.approx(2.404825557695773, abs=1e-12)
    assert b1.v == 1.0
    b2 = quadratic_band_from_waveguide(WaveguideGeometry(2.0, 1.0))
    assert b2.omega_c == pytest.approx(b1.omega_c / 2.0, rel=1e-14)
    b3 = quadratic_band_from_waveguide(WaveguideGeometry(1.0, 2.0))
    assert b3.omega_c == pytest.approx(2.0 * b1.omega_c, rel=1e-14)
    assert b3.v == 2.0


def test_quadratic_matches_tm01_below_half_kc():
    geom = WaveguideGeometry(radius=1.0, c=1.0)
    band = quadratic_band_from_waveguide(geom)
    ks = np.linspace(-0.5 * band.k_c, 0.5 * band.k_c, 101)
    exact = waveguide_dispersion(geom, "TM", 0, 1, ks)
    quad = omega_quadratic(band, ks)
    assert np.max(np.abs(quad - exact) / exact) < 0.01


def test_quadratic_validity_examples():
    band = QuadraticBand(1.0, 1.0)
    rep = quadratic_validity(band, 0.1, 21.9911485751)
    assert rep.valid and rep.ratio == pytest.approx(0.3819, abs=2e-4)
    rep = quadratic_validity(band, 0.5, 100.0)
    assert not rep.valid and rep.ratio == pytest.approx(1.04, abs=1e-6)
    assert quadratic_validity(band, 0.0, 1e12).valid


def test_mode_constant():
    geom = WaveguideGeometry(radius=1.0, c=1.0)
    p01 = special.jn_zeros(0, 1)[0]
    expected = p01 / np.sqrt(2.0 * np.pi**2 * special.jv(1, p01)**2)
    c1 = mode_constant(geom)
    assert c1 == pytest.approx(expected, rel=1e-13)
    assert c1 == pytest.approx(1.0426, abs=2e-4)
    # omega_c R / c = p01 always; doubling R at fixed c scales C by 1/R^2
    # (1/R explicit times 1/R from omega_c), doubling R and c together by 1/R
    assert mode_constant(WaveguideGeometry(2.0, 1.0)) == pytest.approx(
        c1 / 4.0, rel=1e-13)
    assert mode_constant(WaveguideGeometry(2.0, 2.0)) == pytest.approx(
        c1 / 2.0, rel=1e-13)


# ---------------------------------------------------------- crystal trace fn

def _alpha_reference(params, omega):
    # independent re-derivation of the two-term trace expression
    t1 = params.b / params.c1
    t2 = (params.a - params.b) / params.c2
    ratio = params.c1 / params.c2
    return (2.0 * np.cos(omega * t1) * np.cos(omega * t2)
            - (ratio + 1.0 / ratio) * np.sin(omega * t1) * np.sin(omega * t2))


def test_crystal_alpha_examples():
    assert crystal_alpha(FIG_S1, 0.0) == 2.0
    for w in [0.3, 1.0, 2.7, 5.1]:
        assert crystal_alpha(FIG_S1, w) == pytest.approx(
            _alpha_reference(FIG_S1, w), rel=1e-13)
        assert crystal_alpha(FIG_S1, -w) == crystal_alpha(FIG_S1, w)


# -------------------------------------------------------------- crystal bands

def _brute_force_bands(params, ka, n_bands, n_grid=200_000):
    """Oracle: dense scan of cos(ka) - alpha(omega)/2 sign changes."""
    w = np.linspace(0.0, (n_bands + 1.5) * np.pi / params.optical_period, n_grid)
    f = np.cos(ka) - _alpha_reference(params, w) / 2.0
    roots = []
    if abs(f[0]) < 1e-12:
        roots.append(0.0)
    idx = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
    for i in idx:
        a, b = w[i], w[i + 1]
        fa = f[i]
        for _ in range(80):
            m = 0.5 * (a + b)
            fm = np.cos(ka) - _alpha_reference(params, m) / 2.0
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        roots.append(0.5 * (a + b))
    return np.array(roots[:n_bands])


def test_crystal_bands_residual_and_oracle():
    ks = np.array([0.0, 0.31 * np.pi, 0.62 * np.pi, np.pi])
    table = crystal_bands(FIG_S1, ks, n_bands=3)
    for j, k in enumerate(ks):
        for i in range(3):
            w = table.bands[i, j]
            residual = abs(np.cos(k * FIG_S1.a) - crystal_alpha(FIG_S1, w) / 2.0)
            assert residual < 1e-10
        oracle = _brute_force_bands(FIG_S1, k * FIG_S1.a, 3)
        np.testing.assert_allclose(table.bands[:, j], oracle, rtol=1e-7,
                                   atol=1e-7)


def test_crystal_bands_structure():
    ks = np.linspace(0.0, np.pi, 21)
    table = crystal_bands(FIG_S1, ks, n_bands=3)
    # ascending bands everywhere; ordering strict off the uniform-medium point
    assert np.all(np.diff(table.bands, axis=0) > 0)
    # band 1 starts at omega = 0 at k = 0
    assert table.bands[0, 0] == pytest.approx(0.0, abs=1e-10)
    # gaps open at the zone edge: band2(pi/a) - band1(pi/a) > 0 etc.
    edge = table.bands[:, -1]
    assert edge[1] - edge[0] > 0.5
    assert edge[2] - edge[1] > 0.1
    # each band continuous: no jumps larger than the local grid scale allows
    assert np.max(np.abs(np.diff(table.bands, axis=1))) < 0.2


def test_crystal_bands_zone_check():
    with pytest.raises(ValueError):
        crystal_bands(FIG_S1, np.array([1.5 * np.pi]), n_bands=2)


def test_crystal_band2_fit():
    fit = crystal_band2_fit(FIG_S1)
    # curvature velocity close to 0.88 c1, fit within 1% over the window
    assert fit.band.v == pytest.approx(0.88 * FIG_S1.c1, rel=0.03)
    assert fit.max_rel_deviation < 0.01
    # expansion point is the exact zone-edge frequency of band 2
    exact_edge = crystal_bands(FIG_S1, np.array([np.pi]), n_bands=2).bands[1, 0]
    assert fit.band.omega_c == pytest.approx(exact_edge, rel=1e-12)


def test_crystal_band2_fit_deviation_grows_outside_window():
    fit = crystal_band2_fit(FIG_S1)
    ks_out = np.pi - np.array([1.0, 1.2, 1.4])
    w2 = crystal_bands(FIG_S1, ks_out, n_bands=2).bands[1]
    model = fit.band.omega_c + fit.band.v**2 * (ks_out - np.pi)**2 / (
        2.0 * fit.band.omega_c)
    dev = np.abs(model - w2) / w2
    assert np.all(dev > fit.max_rel_deviation)
    assert np.all(np.diff(dev) > 0)


def test_crystal_envelope_validity():
    rep = crystal_envelope_validity(FIG_S1, k0=0.05, sigma_f=5.0)
    assert rep.valid
    assert not crystal_envelope_validity(FIG_S1, k0=0.2, sigma_f=5.0).valid
    # inclusive boundary
    assert crystal_envelope_validity(FIG_S1, k0=0.1, sigma_f=3.0).valid
    # lambda_q consistency report: sigma_f/lambda_q ~ sigma_f * omega_c/(2 pi v)
    fit = crystal_band2_fit(FIG_S1)
    lam_q = 2.0 * np.pi * fit.band.v / fit.band.omega_c
    assert rep.sigma_f_over_lambda_q == pytest.approx(5.0 / lam_q, rel=1e-12)


def test_crystal_params_validation():
    with pytest.raises(ValueError):
        CrystalParams(c1=1.0, c2=0.3, b=1.5, a=1.0)
    with pytest.raises(ValueError):
        CrystalParams(c1=-1.0, c2=0.3, b=0.5, a=1.0)
