"""chirpfigs: render the chirpq experiment CSVs into the standard figure
layouts.

This package consumes the primary simulation's CSV files (with their
``# metadata:`` JSON header) and draws them; it computes no physics, reading
every normalization (E_max, lambda0, t_f, omega_c units) from the metadata.
"""

__version__ = "0.1.0"
