"""Two-level Bloch projections of the four-level state and pulse trajectories.

A sublevel pair (m, n) maps to a Bloch vector through the standard
convention with |m> at the north pole:

    x = 2 Re rho_mn,  y = -2 Im rho_mn,  z = rho_mm - rho_nn,

together with the pair population rho_mm + rho_nn.  The vector is not
renormalized: leakage out of the pair visibly shrinks it, which is the
physical content of sub-unit trajectories, and the norm obeys
x^2 + y^2 + z^2 <= (pair population)^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LEVEL_LABELS, QuartetState, pair_indices, propagator
from .hamiltonian import free_hamiltonian, rotating_hamiltonian
from .ramsey import RamseySettings

#: Default number of sub-steps per pulse when no intra_step is given.
DEFAULT_PULSE_SUBSTEPS = 50


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float
    pair: tuple[str, str]
    pair_population: float


def _project(rho: np.ndarray, i: int, j: int) -> BlochVector:
    coherence = rho[i, j]
    return BlochVector(
        x=2.0 * coherence.real,
        y=-2.0 * coherence.imag,
        z=float(rho[i, i].real - rho[j, j].real),
        pair=(LEVEL_LABELS[i], LEVEL_LABELS[j]),
        pair_population=float(rho[i, i].real + rho[j, j].real),
    )


def pair_projection(state: QuartetState, pair) -> BlochVector:
    """Project a state onto the Bloch sphere of one sublevel pair."""
    i, j = pair_indices(pair)
    return _project(state.density_matrix(), i, j)


def _segment_points(rho, hamiltonian, duration, dt_target, t_offset, i, j):
    """Sub-stepped evolution under a constant Hamiltonian, emitting projections."""
    points = []
    if duration <= 0.0:
        return rho, points
    n_sub = max(1, round(duration / dt_target))
    dt = duration / n_sub
    u_step = propagator(hamiltonian, dt)
    for k in range(1, n_sub + 1):
        rho = u_step @ rho @ u_step.conj().T
        points.append((t_offset + k * dt, _project(rho, i, j)))
    return rho, points


def trajectory(
    settings: RamseySettings,
    pair,
    intra_step: float | None = None,
    tau: float | None = None,
) -> list[tuple[float, BlochVector]]:
    """Bloch trajectory of one pair through pulse - free evolution - pulse.

    Propagates the exact rotating-frame model in sub-steps of
    ``intra_step`` (default: pulse duration / 50) with the piecewise-
    constant Hamiltonian of each segment, emitting ``(t, BlochVector)`` at
    every sub-step.  ``tau`` is the free-evolution interval; by default
    the last point of the settings' tau grid is used.

    Pulse sub-stepping uses the full rotating Hamiltonian regardless of
    the configured pulse model; the trajectory mirrors the exact
    propagation.
    """
    duration = settings.pulse.duration
    if intra_step is None:
        intra_step = duration / DEFAULT_PULSE_SUBSTEPS if duration > 0.0 else settings.dtau
    if not intra_step > 0.0:
        raise ValueError(f"intra_step must be > 0, got {intra_step!r}")
    if duration > 0.0 and intra_step > duration:
        raise ValueError("intra_step must not exceed the pulse duration")
    if tau is None:
        tau = float(settings.taus[-1])
    if tau < 0.0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")

    h_pulse = rotating_hamiltonian(settings.spin)
    if settings.pulse.phase != 0.0:
        from .pulse import _phase_frame

        ph = _phase_frame(settings.pulse.phase)
        h_pulse = (h_pulse * ph[:, None]) * ph.conj()[None, :]
    h_free = free_hamiltonian(settings.spin)

    i, j = pair_indices(pair)
    rho = settings.resolve_initial_state().density_matrix()
    points = [(0.0, _project(rho, i, j))]
    t = 0.0
    for hamiltonian, seg_t in ((h_pulse, duration), (h_free, tau), (h_pulse, duration)):
        rho, seg_points = _segment_points(rho, hamiltonian, seg_t, intra_step, t, i, j)
        points.extend(seg_points)
        t += seg_t
    return points
