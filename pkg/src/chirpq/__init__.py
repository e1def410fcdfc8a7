"""chirpq: self-compressing chirped pulses near a bandgap and the
position-selective dynamics of quantum emitters they drive.

Subpackages by topic:

* :mod:`chirpq.medium`      dispersion relations and band structures
* :mod:`chirpq.pulse`       the closed-form chirped pulse family
* :mod:`chirpq.drive`       coherent-state amplitudes and drive synthesis
* :mod:`chirpq.emitter`     Lindblad dynamics of qubit and transmon
* :mod:`chirpq.lz`          Landau-Zener decomposition and addressing width
* :mod:`chirpq.experiments` scans, sweeps and the scattering budget
* :mod:`chirpq.cli`         command-line entry point
"""

__version__ = "0.1.0"
