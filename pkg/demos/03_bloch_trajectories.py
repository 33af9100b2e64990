"""Bloch-sphere view of one Ramsey run, pair by pair.

Projects the four-level state onto the three neighboring two-level
subspaces while it evolves through pulse - free precession - pulse.  The
addressed outer pair swings from the south pole to the equator and winds
at the detuning rate; the non-addressed pairs trace small but coherent
loops seeded by the finite pulse bandwidth.  Vectors are not renormalized,
so leakage out of a pair visibly shrinks its arrow below unit length.

Writes demos/output/bloch_trajectories.png.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import quartetsim as q

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

spin = q.SpinParams.from_mhz(2.25, 1.0, 5.0)
pulse = q.PulseParams(spin, q.resonant_pi_half_duration(spin.omega1))  # 50 ns
settings = q.RamseySettings(
    pulse=pulse, dtau=0.06, n_samples=16, initial_state="plus_half", observable="o2"
)
tau_us = 1.0

fig = plt.figure(figsize=(11, 4))
for k, pair in enumerate((("+3/2", "+1/2"), ("+1/2", "-1/2"), ("-1/2", "-3/2"))):
    points = q.trajectory(settings, pair, tau=tau_us)
    xs = np.array([v.x for _, v in points])
    ys = np.array([v.y for _, v in points])
    zs = np.array([v.z for _, v in points])

    ax = fig.add_subplot(1, 3, k + 1, projection="3d")
    u, w = np.mgrid[0 : 2 * np.pi : 40j, 0 : np.pi : 20j]
    ax.plot_wireframe(
        np.cos(u) * np.sin(w), np.sin(u) * np.sin(w), np.cos(w),
        color="lightgray", lw=0.3, alpha=0.5,
    )
    ax.plot(xs, ys, zs, lw=1.0, color="C0")
    ax.scatter(*[[v] for v in (xs[0], ys[0], zs[0])], color="purple", s=25, label="start")
    ax.scatter(*[[v] for v in (xs[-1], ys[-1], zs[-1])], color="red", s=25, label="end")
    ax.set_title(f"{pair[0]} : {pair[1]}", fontsize=10)
    ax.set_box_aspect((1, 1, 1))
    for axis in (ax.xaxis, ax.yaxis, ax.zaxis):
        axis.set_ticklabels([])
    max_excursion = float(np.max(np.hypot(xs, ys)))
    print(f"pair {pair[0]}:{pair[1]}  max in-plane excursion = {max_excursion:.4f}")

fig.suptitle("Ramsey sequence on the Bloch spheres of the three neighbor pairs", fontsize=11)
fig.subplots_adjust(left=0.02, right=0.98, wspace=0.08)
fig.savefig(OUT / "bloch_trajectories.png", dpi=160)
print(f"wrote {OUT / 'bloch_trajectories.png'}")
