"""The avoided-crossing picture behind the addressing peak.

In a frame following the drive phase, the qubit sees a detuning sweep
Delta(d, t) with an avoided crossing of gap g(d, t).  While the coupling
window is open, the detuning changes sign twice on focus (the qubit comes
back down) but once away from it (it stays excited).  The positions where a
sign change meets the window edge set the addressing width sigma_q.

Run:  python3 demos/05_landau_zener.py
"""

import numpy as np

from chirpq.emitter import QubitSpec
from chirpq.lz import (SIGMA_Q_HALF_LEVEL, dressed_energies, gap_window,
                       interaction_time, lz_decompose, sigma_q_estimate)
from chirpq.pulse import pulse_from_ratios

pulse = pulse_from_ratios(1.005, 18.0, 0.35)
qubit = QubitSpec(omega_q=pulse.omega0, gamma=1e-6 * pulse.omega0,
                  rabi0=0.038, convention="rwa-max")

print("coupling window and detuning sign changes vs position:")
print("  (d-d_f)/sigma_f   window/t_f      sign changes inside")
for off in [0.0, 0.5, 1.0, 2.0, 4.0]:
    d = pulse.d_f + off * pulse.sigma_f
    win = gap_window(pulse, qubit, d, level=SIGMA_Q_HALF_LEVEL)
    print(f"  {off:15.1f}   {win.length / pulse.t_f:10.4f}"
          f"   {len(win.inside_crossings):8d}")

g, _, delta = lz_decompose(pulse, qubit, pulse.d_f, pulse.t_f)
lo, hi = dressed_energies(delta, g)
print(f"\nat the focus instant: g = {g:.4f}, Delta = {delta:.2e}, "
      f"dressed gap = {hi - lo:.4f}")

dt = interaction_time(pulse)
print(f"interaction-time estimate Delta tau = {dt:.1f}/omega_c "
      f"({dt / pulse.t_f:.3f} t_f)")

est = sigma_q_estimate(pulse, qubit)
print(f"\naddressing width from the coincidence construction: "
      f"sigma_q = {est.sigma_q:.2f} = {est.ratio:.3f} sigma_f "
      f"(d1, d2 at {est.d1 - pulse.d_f:+.2f}, {est.d2 - pulse.d_f:+.2f} "
      f"about d_f)")
for sfl, om in [(0.5, 0.030)]:
    p2 = pulse_from_ratios(1.005, 18.0, sfl)
    q2 = QubitSpec(omega_q=p2.omega0, gamma=1e-6 * p2.omega0, rabi0=om,
                   convention="rwa-max")
    est2 = sigma_q_estimate(p2, q2)
    print(f"same construction at sigma_f = {sfl} lambda0: ratio = "
          f"{est2.ratio:.3f} (proportional to the spot size)")
