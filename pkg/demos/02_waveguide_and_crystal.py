"""Two media that realize the quadratic band.

A hollow cylindrical waveguide (lowest TM band above the Bessel-root cutoff)
and a two-layer photonic crystal (second band about the zone edge).  Prints
the quadratic-fit parameters and the validity checks for pulses living in
each band.

Run:  python3 demos/02_waveguide_and_crystal.py
"""

import numpy as np

from chirpq.medium import (CrystalParams, WaveguideGeometry, crystal_band2_fit,
                           crystal_bands, crystal_envelope_validity,
                           mode_constant, omega_quadratic,
                           quadratic_band_from_waveguide, quadratic_validity,
                           waveguide_dispersion)

# --- hollow waveguide -------------------------------------------------------
geom = WaveguideGeometry(radius=1.0, c=1.0)
band = quadratic_band_from_waveguide(geom)
print(f"waveguide: cutoff omega_c = {band.omega_c:.6f} (= c p01/R), v = c,"
      f" mode constant C = {mode_constant(geom):.4f}")

ks = np.linspace(0.0, 0.5 * band.k_c, 6)
print("\n  k/k_c   exact TM01   quadratic   rel. diff")
for k in ks:
    exact = waveguide_dispersion(geom, "TM", 0, 1, k)
    quad = omega_quadratic(band, k)
    print(f"  {k / band.k_c:5.2f}   {exact:10.5f}   {quad:9.5f}"
          f"   {abs(quad - exact) / exact:9.2e}")

rep = quadratic_validity(band, 0.1 * band.k_c, 3.5 / band.k_c * 2 * np.pi)
print(f"\nquadratic-band regime for the standard pulse: "
      f"ratio = {rep.ratio:.3f} -> {'valid' if rep.valid else 'violated'}")

# --- binary photonic crystal -------------------------------------------------
params = CrystalParams(c1=1.0, c2=0.3, b=0.5, a=1.0)
table = crystal_bands(params, np.linspace(0.0, np.pi, 9), n_bands=3)
print("\ncrystal bands (c2 = 0.3 c1, b = 0.5 a):")
print("  k a/pi   band1     band2     band3")
for j, ka in enumerate(table.k_grid):
    w = table.bands[:, j]
    print(f"  {ka / np.pi:6.3f}   {w[0]:7.4f}   {w[1]:7.4f}   {w[2]:7.4f}")

fit = crystal_band2_fit(params)
print(f"\nband-2 quadratic fit about k = pi/a: omega_c = {fit.band.omega_c:.4f},"
      f" v = {fit.band.v:.4f} c1 (max deviation "
      f"{fit.max_rel_deviation * 100:.2f}% over the stated window)")

env = crystal_envelope_validity(params, k0=0.05, sigma_f=5.0)
print(f"envelope regime (k0 a = {env.k0_a}, sigma_f = {env.sigma_f_over_a} a): "
      f"{'valid' if env.valid else 'violated'}; "
      f"sigma_f/lambda_q = {env.sigma_f_over_lambda_q:.2f}")
