"""Dispersion relations and band structures.

Three media are covered:

* an abstract single band that is quadratic just above a cutoff,
  ``omega(k) = omega_c + v**2 k**2 / (2 omega_c)``,
* the exact mode bands of a hollow cylindrical waveguide with perfectly
  conducting walls (TM/TE families, Bessel-root cutoffs),
* a two-layer (binary) photonic crystal, whose bands solve the implicit
  equation ``cos(k a) = alpha(omega) / 2``.

Internal units are dimensionless: hbar = 1 and, for the standard setups,
omega_c = v = 1 so that k_c = omega_c / v = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

__all__ = [
    "BelowCutoffError",
    "BracketingError",
    "QuadraticBand",
    "WaveguideGeometry",
    "CrystalParams",
    "BandTable",
    "ValidityReport",
    "CrystalBandFit",
    "EnvelopeValidity",
    "omega_quadratic",
    "k_of_omega",
    "bessel_root",
    "waveguide_dispersion",
    "quadratic_band_from_waveguide",
    "quadratic_validity",
    "mode_constant",
    "crystal_alpha",
    "crystal_bands",
    "crystal_band2_fit",
    "crystal_envelope_validity",
]


class BelowCutoffError(ValueError):
    """Requested frequency lies in the bandgap (below cutoff)."""


class BracketingError(RuntimeError):
    """Root bracketing failed; message records the scanned interval."""


@dataclass(frozen=True)
class QuadraticBand:
    """Single propagating band ``omega_c + v**2 k**2 / (2 omega_c)``."""

    omega_c: float
    v: float

    def __post_init__(self):
        if self.omega_c <= 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")
        if self.v <= 0:
            raise ValueError(f"v must be positive, got {self.v}")

    @property
    def k_c(self) -> float:
        return self.omega_c / self.v


@dataclass(frozen=True)
class WaveguideGeometry:
    """Hollow cylindrical waveguide of radius ``radius``; ``c`` is the wave speed."""

    radius: float
    c: float = 1.0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.c <= 0:
            raise ValueError(f"c must be positive, got {self.c}")


@dataclass(frozen=True)
class CrystalParams:
    """Binary multilayer crystal: layer speeds c1, c2, first-layer thickness b, cell a."""

    c1: float
    c2: float
    b: float
    a: float

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("layer speeds c1, c2 must be positive")
        if not 0 < self.b < self.a:
            raise ValueError(f"need 0 < b < a, got b={self.b}, a={self.a}")

    @property
    def optical_period(self) -> float:
        """Traversal time of one unit cell, b/c1 + (a-b)/c2."""
        return self.b / self.c1 + (self.a - self.b) / self.c2


@dataclass(frozen=True)
class BandTable:
    """Band frequencies sampled on a wavenumber grid; bands[i] is band ``i+1``."""

    k_grid: np.ndarray
    bands: np.ndarray  # shape (n_bands, len(k_grid)), ascending in band index

    def __post_init__(self):
        if self.bands.ndim != 2 or self.bands.shape[1] != len(self.k_grid):
            raise ValueError("bands must have shape (n_bands, len(k_grid))")

    @property
    def band_indices(self) -> tuple[int, ...]:
        return tuple(range(1, self.bands.shape[0] + 1))

    def band(self, index: int) -> np.ndarray:
        """Return band ``index`` (1-based)."""
        if index < 1 or index > self.bands.shape[0]:
            raise IndexError(f"band index {index} out of range")
        return self.bands[index - 1]


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of a regime check: the criterion ratio and whether it holds."""

    valid: bool
    ratio: float


@dataclass(frozen=True)
class CrystalBandFit:
    """Quadratic fit of band 2 about the zone edge k = pi/a."""

    band: QuadraticBand
    max_rel_deviation: float
    k_window: tuple[float, float]


@dataclass(frozen=True)
class EnvelopeValidity:
    """Envelope-approximation regime check for pulses in the crystal."""

    valid: bool
    k0_a: float
    sigma_f_over_a: float
    sigma_f_over_lambda_q: float


def omega_quadratic(band: QuadraticBand, k):
    """Band frequency at wavenumber ``k`` (even in k, minimum omega_c at k=0)."""
    k = np.asarray(k, dtype=float)
    out = band.omega_c + band.v**2 * k**2 / (2.0 * band.omega_c)
    return out if out.ndim else float(out)


def k_of_omega(band: QuadraticBand, omega):
    """Non-negative wavenumber with band frequency ``omega``.

    Raises BelowCutoffError for omega < omega_c.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < band.omega_c):
        raise BelowCutoffError(
            f"omega={omega} below cutoff omega_c={band.omega_c}"
        )
    out = np.sqrt(2.0 * band.omega_c * (omega - band.omega_c)) / band.v
    return out if out.ndim else float(out)


def bessel_root(kind: str, n: int, m: int) -> float:
    """m-th positive root of J_n (kind="jn") or of J_n' (kind="jn-derivative").

    Roots are indexed from m = 1 and increase strictly with m. For
    kind="jn-derivative" the trivial root x = 0 of J_0' is not counted.
    """
    if m < 1:
        raise ValueError(f"root index m must be >= 1, got {m}")
    if n < 0:
        raise ValueError(f"order n must be >= 0, got {n}")
    if kind in ("jn", "zero-of-Jn"):
        return float(special.jn_zeros(n, m)[m - 1])
    if kind in ("jn-derivative", "jnp", "zero-of-Jn-derivative"):
        return float(special.jnp_zeros(n, m)[m - 1])
    raise ValueError(f"unknown Bessel root kind {kind!r}")


def waveguide_dispersion(geom: WaveguideGeometry, family: str, n: int, m: int, k):
    """Exact band ``c * sqrt(k_nm**2 + k**2)`` of the hollow waveguide.

    ``family`` is "TM" (cutoffs at Bessel zeros p_nm) or "TE" (cutoffs at
    zeros q_nm of the Bessel derivative).
    """
    family = family.upper()
    if family == "TM":
        k_nm = bessel_root("jn", n, m) / geom.radius
    elif family == "TE":
        k_nm = bessel_root("jn-derivative", n, m) / geom.radius
    else:
        raise ValueError(f"family must be 'TM' or 'TE', got {family!r}")
    k = np.asarray(k, dtype=float)
    out = geom.c * np.sqrt(k_nm**2 + k**2)
    return out if out.ndim else float(out)


def quadratic_band_from_waveguide(geom: WaveguideGeometry) -> QuadraticBand:
    """Quadratic approximation of the lowest TM band: omega_c = c p01 / R, v = c."""
    p01 = bessel_root("jn", 0, 1)
    return QuadraticBand(omega_c=geom.c * p01 / geom.radius, v=geom.c)


def quadratic_validity(band: QuadraticBand, pulse_k0: float, pulse_sigma_f: float) -> ValidityReport:
    """Check k0 + 2/sigma_f <= omega_c / (2 v); ratio is lhs/rhs (inclusive)."""
    if pulse_sigma_f <= 0:
        raise ValueError("sigma_f must be positive")
    ratio = (pulse_k0 + 2.0 / pulse_sigma_f) / (band.omega_c / (2.0 * band.v))
    return ValidityReport(valid=ratio <= 1.0, ratio=ratio)


def mode_constant(geom: WaveguideGeometry) -> float:
    """Normalization constant of the on-axis TM01 mode field.

    C = omega_c / (R * sqrt(2 pi^2 J_1^2(omega_c R / c))) with
    omega_c = c p01 / R, so the Bessel argument is always p01.
    """
    band = quadratic_band_from_waveguide(geom)
    x = band.omega_c * geom.radius / geom.c
    j1 = special.jv(1, x)
    return band.omega_c / (geom.radius * np.sqrt(2.0 * np.pi**2 * j1**2))


def crystal_alpha(params: CrystalParams, omega):
    """Trace function of the binary crystal; bands solve cos(k a) = alpha/2.

    alpha(0) = 2, and alpha is even and smooth in omega.
    """
    omega = np.asarray(omega, dtype=float)
    u = params.b * omega / params.c1
    w = (params.a - params.b) * omega / params.c2
    out = 2.0 * np.cos(u) * np.cos(w) - (
        (params.c1**2 + params.c2**2) / (params.c1 * params.c2)
    ) * np.sin(u) * np.sin(w)
    return out if out.ndim else float(out)


def _crystal_roots_at_k(params: CrystalParams, ka: float, n_bands: int,
                        n_scan: int = 2000) -> np.ndarray:
    """Lowest ``n_bands`` solutions of cos(ka) = alpha(omega)/2 at fixed k.

    Scans omega on a uniform grid, brackets sign changes and refines by
    bisection; the uniform-medium point omega = 0 (only a root for ka = 0,
    where it is a tangency rather than a crossing) is handled explicitly.
    """
    target = np.cos(ka)

    def f(w):
        return target - crystal_alpha(params, w) / 2.0

    # One band per half-oscillation of alpha; pad the scan range generously.
    omega_max = (n_bands + 1.5) * np.pi / params.optical_period
    grid = np.linspace(0.0, omega_max, n_scan + 1)
    vals = f(grid)

    roots: list[float] = []
    if abs(vals[0]) < 1e-13:
        roots.append(0.0)
    for i in range(len(grid) - 1):
        a, b = grid[i], grid[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0 and a > 0.0:
            roots.append(a)
            continue
        if fa * fb < 0.0:
            roots.append(optimize.bisect(f, a, b, xtol=1e-12, rtol=8.9e-16))
    if len(roots) < n_bands:
        raise BracketingError(
            f"found {len(roots)} bands < {n_bands} scanning "
            f"omega in [0, {omega_max:.6g}] with {n_scan} steps at k*a={ka:.6g}"
        )
    return np.array(roots[:n_bands])


def crystal_bands(params: CrystalParams, k, n_bands: int = 3) -> BandTable:
    """Lowest ``n_bands`` crystal bands on the wavenumber grid ``k``.

    ``k`` must lie in the first Brillouin zone |k| <= pi/a. Bands are sorted
    ascending and each returned frequency satisfies
    |cos(k a) - alpha(omega)/2| < 1e-10.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(np.abs(k) > np.pi / params.a * (1 + 1e-12)):
        raise ValueError("k outside first Brillouin zone |k| <= pi/a")
    bands = np.empty((n_bands, len(k)))
    for j, kj in enumerate(k):
        bands[:, j] = _crystal_roots_at_k(params, kj * params.a, n_bands)
    return BandTable(k_grid=k, bands=bands)


def crystal_band2_fit(params: CrystalParams, window: float = 0.75,
                      fit_window: float | None = None,
                      n_fit: int = 161) -> CrystalBandFit:
    """Quadratic fit of band 2 about k = pi/a.

    The cutoff is pinned to the exact band-2 frequency at the zone edge; the
    curvature velocity v comes from a least-squares fit in (k - pi/a)^2 close
    to the expansion point (inner half of the validity window by default,
    where the quadratic term dominates).  The maximum relative deviation of
    the fit is reported over the full window k in [pi/a - window/a, pi/a]
    (the band is symmetric about pi/a).
    """
    if fit_window is None:
        fit_window = 0.5 * window
    k_edge = np.pi / params.a
    k_lo = k_edge - window / params.a
    ks = np.linspace(k_lo, k_edge, n_fit)
    table = crystal_bands(params, ks, n_bands=2)
    w2 = table.band(2)
    omega_c = w2[-1]

    x = (ks - k_edge) ** 2
    y = w2 - omega_c
    near = ks >= k_edge - fit_window / params.a
    v2 = 2.0 * omega_c * float(x[near] @ y[near]) / float(x[near] @ x[near])
    if v2 <= 0:
        raise BracketingError("band 2 is not convex about the zone edge")
    band = QuadraticBand(omega_c=omega_c, v=float(np.sqrt(v2)))

    fit = omega_c + v2 * x / (2.0 * omega_c)
    max_rel = float(np.max(np.abs(fit - w2) / w2))
    return CrystalBandFit(band=band, max_rel_deviation=max_rel,
                          k_window=(k_lo, k_edge + window / params.a))


def crystal_envelope_validity(params: CrystalParams, k0: float,
                              sigma_f: float) -> EnvelopeValidity:
    """Envelope-approximation regime: k0*a <= 0.1 and sigma_f/a >= 3 (inclusive).

    Also reports sigma_f / lambda_q with lambda_q = 2 pi v / omega_c taken
    from the band-2 quadratic fit.
    """
    k0_a = k0 * params.a
    sf_a = sigma_f / params.a
    fit = crystal_band2_fit(params)
    lambda_q = 2.0 * np.pi * fit.band.v / fit.band.omega_c
    return EnvelopeValidity(
        valid=(k0_a <= 0.1) and (sf_a >= 3.0),
        k0_a=k0_a,
        sigma_f_over_a=sf_a,
        sigma_f_over_lambda_q=sigma_f / lambda_q,
    )
