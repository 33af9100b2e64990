"""Microwave pulse propagators, computed two independent ways.

``exact_pulse_propagator`` integrates the full rotating-frame Hamiltonian
including the zero-field term.  The hard-pulse route instead neglects the
zero-field evolution during the pulse while keeping the static detuning,
so the effective generator is a tilted-axis rotation

    H_p = -(delta + 2 dgs) Sz + omega1 Sx
        = Omega_rabi (cos(beta) Sz + sin(beta) Sx),

with Omega_rabi = sqrt((delta + 2 dgs)^2 + omega1^2) and the tilt angle
beta fixed jointly by cos(beta) = -(delta + 2 dgs)/Omega_rabi and
sin(beta) = omega1/Omega_rabi.  We take the unique beta in [0, pi]; only
the (cos, sin) pair enters the propagator, never the sign convention of
beta itself.  The rotation then factorizes through the spin-3/2 Wigner
small-d matrix,

    U_p = d(beta) @ diag(exp(-i m theta)) @ d(-beta),   theta = Omega_rabi * tau_p,

and ``closed_form_elements`` builds the same unitary from the expanded
per-element expressions, which serve as a mutual algebraic oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import LEVELS, propagator, spin_operators
from .hamiltonian import SpinParams, rotating_hamiltonian
from .units import ns_to_us

_SZ, _SX, _SY = spin_operators()
_SQRT3 = math.sqrt(3.0)
_M_VALUES = np.array(LEVELS)


@dataclass(frozen=True)
class PulseParams:
    """One rectangular microwave pulse: drive parameters, duration, phase.

    Attributes:
        spin: drive and level parameters (rad/us).
        duration: pulse length tau_p in us, >= 0.
        phase: relative microwave phase in rad; 0 keeps the drive along Sx.
    """

    spin: SpinParams
    duration: float
    phase: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.duration) and self.duration >= 0.0):
            raise ValueError(f"pulse duration must be finite and >= 0, got {self.duration!r}")
        if not math.isfinite(self.phase):
            raise ValueError("pulse phase must be finite")

    @classmethod
    def from_ns(cls, spin: SpinParams, duration_ns: float, phase: float = 0.0) -> "PulseParams":
        return cls(spin=spin, duration=ns_to_us(duration_ns), phase=phase)


@dataclass(frozen=True)
class HardPulseFrame:
    """Tilted rotation frame of the hard-pulse approximation.

    Attributes:
        omega_rabi: effective Rabi rate, sqrt((delta + 2 dgs)^2 + omega1^2).
        beta: tilt angle in [0, pi] with cos(beta) = -(delta + 2 dgs)/omega_rabi
            and sin(beta) = omega1/omega_rabi.
        theta: accumulated rotation angle omega_rabi * duration.
    """

    omega_rabi: float
    beta: float
    theta: float


def hard_pulse_frame(spin: SpinParams, duration: float) -> HardPulseFrame:
    """Effective Rabi rate and tilt angle of a rectangular detuned pulse.

    Raises:
        ValueError: if omega_rabi = 0 (no drive and no effective detuning),
            where the tilt direction is undefined.
    """
    z = -(spin.delta + 2.0 * spin.dgs)
    omega_rabi = math.hypot(z, spin.omega1)
    if omega_rabi == 0.0:
        raise ValueError("hard-pulse frame is undefined: omega_rabi = 0 (omega1 = 0 and delta + 2*dgs = 0)")
    beta = math.atan2(spin.omega1 / omega_rabi, z / omega_rabi)
    return HardPulseFrame(omega_rabi=omega_rabi, beta=beta, theta=omega_rabi * duration)


def wigner_small_d(beta: float) -> np.ndarray:
    """Spin-3/2 Wigner small-d matrix, the real orthogonal matrix of exp(-i beta Sy).

    Entries are polynomials in c = cos(beta/2), s = sin(beta/2); rows and
    columns follow the fixed basis order (+3/2, +1/2, -1/2, -3/2).
    """
    c, s = math.cos(0.5 * beta), math.sin(0.5 * beta)
    c2, s2 = c * c, s * s
    return np.array(
        [
            [c * c2, -_SQRT3 * c2 * s, _SQRT3 * c * s2, -s * s2],
            [_SQRT3 * c2 * s, c * (c2 - 2.0 * s2), (s2 - 2.0 * c2) * s, _SQRT3 * c * s2],
            [_SQRT3 * c * s2, (2.0 * c2 - s2) * s, c * (c2 - 2.0 * s2), -_SQRT3 * c2 * s],
            [s * s2, _SQRT3 * c * s2, _SQRT3 * c2 * s, c * c2],
        ]
    )


def _phase_frame(phase: float) -> np.ndarray:
    """Diagonal of exp(-i phase Sz), which rotates the drive axis about z."""
    return np.exp(-1j * phase * _M_VALUES)


def exact_pulse_propagator(pulse: PulseParams) -> np.ndarray:
    """exp(-i H_rot tau_p) with the full rotating-frame Hamiltonian.

    For a nonzero pulse phase the transverse drive axis is rotated,
    replacing Sx by cos(phase) Sx + sin(phase) Sy; this is the z-rotation
    conjugation exp(-i phase Sz) U(0) exp(+i phase Sz).
    """
    u = propagator(rotating_hamiltonian(pulse.spin), pulse.duration)
    if pulse.phase != 0.0:
        ph = _phase_frame(pulse.phase)
        u = (u * ph[:, None]) * ph.conj()[None, :]
    return u


def hard_pulse_propagator(pulse: PulseParams) -> np.ndarray:
    """Hard-pulse propagator assembled from Wigner small-d rotations.

    U = d(beta) @ diag(e^{-3i theta/2}, e^{-i theta/2}, e^{+i theta/2},
    e^{+3i theta/2}) @ d(-beta); zero-field evolution during the pulse is
    neglected by construction, only the linear detuning term is kept.
    """
    frame = hard_pulse_frame(pulse.spin, pulse.duration)
    lam = np.exp(-1j * frame.theta * _M_VALUES)
    d = wigner_small_d(frame.beta)
    u = (d * lam[None, :]) @ d.T
    if pulse.phase != 0.0:
        ph = _phase_frame(pulse.phase)
        u = (u * ph[:, None]) * ph.conj()[None, :]
    return u


def closed_form_elements(pulse: PulseParams) -> np.ndarray:
    """Hard-pulse propagator from the expanded closed-form matrix elements.

    Six scalar expressions (z1, n1, d1, t1, z2, n2) in q = e^{-i theta/2},
    p = e^{-3i theta/2}, c = cos(beta/2) and s = sin(beta/2) populate all
    sixteen entries through the transpose symmetry U = U^T and the
    anti-diagonal conjugation pattern.  Algebraically identical to
    :func:`hard_pulse_propagator`; kept as a mutual oracle.
    """
    frame = hard_pulse_frame(pulse.spin, pulse.duration)
    c, s = math.cos(0.5 * frame.beta), math.sin(0.5 * frame.beta)
    c2, s2 = c * c, s * s
    q = complex(math.cos(0.5 * frame.theta), -math.sin(0.5 * frame.theta))
    p = complex(math.cos(1.5 * frame.theta), -math.sin(1.5 * frame.theta))
    qc, pc = q.conjugate(), p.conjugate()

    z1 = p * c2**3 + 3.0 * q * c2**2 * s2 + 3.0 * qc * c2 * s2**2 + pc * s2**3
    n1 = _SQRT3 * c * s * (
        -p * c2**2
        + q * c2 * (c2 - 2.0 * s2)
        + qc * s2 * (2.0 * c2 - s2)
        + pc * s2**2
    )
    d1 = _SQRT3 * c2 * s2 * (p * c2 + q * (s2 - 2.0 * c2) + qc * (c2 - 2.0 * s2) + pc * s2)
    t1 = c2 * c * s2 * s * (-p + 3.0 * q - 3.0 * qc + pc)
    z2 = (
        3.0 * p * c2**2 * s2
        + q * c2 * (c2 - 2.0 * s2) ** 2
        + qc * s2 * (2.0 * c2 - s2) ** 2
        + 3.0 * pc * c2 * s2**2
    )
    n2 = c * s * (c2 - 2.0 * s2) * (2.0 * c2 - s2) * (qc - q) + 3.0 * c2 * c * s2 * s * (pc - p)

    # Basis order (+3/2, +1/2, -1/2, -3/2).  For beta in [0, pi] the
    # odd-|m - n| entries carry a minus sign relative to the same table
    # written with a negative tilt angle; the two conventions describe the
    # same unitary.
    u = np.array(
        [
            [z1, -n1, d1, -t1],
            [-n1, z2, -n2, d1.conjugate()],
            [d1, -n2, z2.conjugate(), n1.conjugate()],
            [-t1, d1.conjugate(), n1.conjugate(), z1.conjugate()],
        ]
    )
    if pulse.phase != 0.0:
        ph = _phase_frame(pulse.phase)
        u = (u * ph[:, None]) * ph.conj()[None, :]
    return u


def resonant_pi_half_duration(omega1: float) -> float:
    """Duration solving omega1 * tau = pi/2 for an ideal resonant quarter rotation."""
    if omega1 <= 0.0:
        raise ValueError(f"omega1 must be > 0, got {omega1!r}")
    return 0.5 * math.pi / omega1
