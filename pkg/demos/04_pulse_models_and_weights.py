"""Exact versus hard-pulse propagators and the branch weight table.

The hard-pulse model treats each pulse as a pure tilted-axis rotation,
neglecting the zero-field term while the drive is on.  This script shows

  1. the approximation converging to the exact propagator as the
     zero-field parameter shrinks at fixed rotation angle, and
  2. the per-pair signal weights |X| of both models at one working point:
     the middle-pair weight is structurally zero in the hard-pulse
     algebra, while full propagation makes it one of the strongest lines.

Writes demos/output/pulse_model_convergence.png and prints the table.
"""

import math
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import quartetsim as q

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# 1. convergence at fixed rotation angle theta = pi/2
delta_mhz, omega1_mhz = 1.0, 5.0
dgs_values = np.logspace(0, -3, 13)  # MHz
defects = []
for dgs_mhz in dgs_values:
    spin = q.SpinParams.from_mhz(dgs_mhz, delta_mhz, omega1_mhz)
    frame = q.hard_pulse_frame(spin, 1.0)
    pp = q.PulseParams(spin, (math.pi / 2) / frame.omega_rabi)
    defects.append(
        np.max(np.abs(q.exact_pulse_propagator(pp) - q.hard_pulse_propagator(pp)))
    )

fig, ax = plt.subplots(figsize=(5, 3.6))
ax.loglog(dgs_values, defects, "o-")
ax.set_xlabel("zero-field parameter (MHz)")
ax.set_ylabel("max |exact - hard-pulse|")
ax.set_title("Hard-pulse error at fixed rotation angle $\\theta = \\pi/2$", fontsize=10)
fig.tight_layout()
fig.savefig(OUT / "pulse_model_convergence.png", dpi=160)
print(f"wrote {OUT / 'pulse_model_convergence.png'}")

# 2. branch weights at the working point (dgs 2.25 MHz, 50 ns pulses)
spin = q.SpinParams.from_mhz(2.25, delta_mhz, omega1_mhz)
pp = q.PulseParams(spin, q.resonant_pi_half_duration(spin.omega1))
psi0 = q.QuartetState.basis_level("+1/2")
exact = q.analytic_decomposition(q.exact_pulse_propagator(pp), psi0, spin, "o2")
hard = q.hard_pulse_decomposition(pp, psi0, "o2")

print("\npair           omega (MHz)   |X| exact     |X| hard")
for term_e, term_h in zip(exact.terms, hard.terms):
    label = f"{term_e.pair[0]}:{term_e.pair[1]}"
    print(
        f"{label:<14} {term_e.omega / (2 * math.pi):>10.4f}   {abs(term_e.x):.6f}     {abs(term_h.x):.3e}"
    )
print(f"constant term: exact {exact.c0:.6f}, hard {hard.c0:.6f}")
print(
    "\nthe -1/2:+1/2 weight collapses to zero in the hard-pulse algebra but is "
    "comparable to the strongest weights under full propagation."
)
