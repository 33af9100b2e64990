"""Ramsey sequence assembly, signal traces and the analytic weight decomposition.

The sequence is pulse - free evolution tau - pulse with a common microwave
phase.  Reading out the population of a level pair after the second pulse
turns the six pairwise coherence phases accumulated during free evolution
into population modulations, so the signal is a constant plus up to six
cosines:

    S(tau) = c0 + sum over pairs m<n of 2 |X_mn| cos(Omega_mn tau - arg X_mn)

with Omega_mn the free-evolution level splittings.  The weights X_mn come
from the bilinear form below and depend only on the prepared state, the
pulse unitary and the chosen readout projector.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .core import LEVEL_LABELS, QuartetState, level_index
from .hamiltonian import SpinParams, free_eigenvalues
from .pulse import PulseParams, closed_form_elements, exact_pulse_propagator, hard_pulse_propagator
from .spectral import TimeTrace

PULSE_MODELS = ("exact", "hard")
OBSERVABLES = ("o1", "o2")
INITIAL_STATES = ("plus_half", "mixed_half")

#: Basis indices whose populations each observable sums.
_OBSERVABLE_SUPPORT = {"o1": (1, 2), "o2": (0, 3)}


def observable_projector(which: str) -> np.ndarray:
    """Projector onto the inner ("o1", m = +-1/2) or outer ("o2", m = +-3/2) doublet.

    The two projectors are complementary: o1 + o2 is the identity, so the
    corresponding signals always sum to one.
    """
    if which not in _OBSERVABLE_SUPPORT:
        raise ValueError(f"observable must be one of {OBSERVABLES}, got {which!r}")
    proj = np.zeros((4, 4), dtype=complex)
    for k in _OBSERVABLE_SUPPORT[which]:
        proj[k, k] = 1.0
    return proj


@dataclass(frozen=True)
class RamseySettings:
    """Full configuration of one Ramsey run.

    Attributes:
        pulse: the pi/2 pulse applied twice (same parameters and phase).
        pulse_model: "exact" (full rotating-frame propagation) or "hard"
            (tilted-rotation approximation).
        tau_start: first free-evolution time on the grid, us.
        dtau: grid step, us, > 0.
        n_samples: number of grid points, >= 2.
        initial_state: "plus_half", "mixed_half", or a custom QuartetState.
        observable: "o1" or "o2" readout.
        t2star: optional dephasing time constant (us).  When set, the
            oscillatory part of the trace (sample minus grid mean) is
            damped by exp(-tau / t2star); the default is fully unitary.
    """

    pulse: PulseParams
    dtau: float
    n_samples: int
    pulse_model: str = "exact"
    tau_start: float = 0.0
    initial_state: str | QuartetState = "mixed_half"
    observable: str = "o2"
    t2star: float | None = None

    def __post_init__(self):
        if self.pulse_model not in PULSE_MODELS:
            raise ValueError(f"pulse_model must be one of {PULSE_MODELS}, got {self.pulse_model!r}")
        if self.observable not in OBSERVABLES:
            raise ValueError(f"observable must be one of {OBSERVABLES}, got {self.observable!r}")
        if not (math.isfinite(self.dtau) and self.dtau > 0.0):
            raise ValueError(f"dtau must be finite and > 0, got {self.dtau!r}")
        if self.n_samples < 2:
            raise ValueError(f"n_samples must be >= 2, got {self.n_samples!r}")
        if isinstance(self.initial_state, str) and self.initial_state not in INITIAL_STATES:
            raise ValueError(
                f"initial_state must be one of {INITIAL_STATES} or a QuartetState, got {self.initial_state!r}"
            )
        if self.t2star is not None and not (math.isfinite(self.t2star) and self.t2star > 0.0):
            raise ValueError(f"t2star must be > 0 when set, got {self.t2star!r}")

    @property
    def spin(self) -> SpinParams:
        return self.pulse.spin

    def with_delta(self, delta: float) -> "RamseySettings":
        """Copy of these settings at a different detuning (rad/us)."""
        spin = dataclasses.replace(self.pulse.spin, delta=delta)
        return dataclasses.replace(self, pulse=dataclasses.replace(self.pulse, spin=spin))

    def resolve_initial_state(self) -> QuartetState:
        if isinstance(self.initial_state, QuartetState):
            return self.initial_state
        if self.initial_state == "plus_half":
            return QuartetState.basis_level("+1/2")
        return QuartetState.equal_mixture("+1/2", "-1/2")

    @property
    def taus(self) -> np.ndarray:
        return self.tau_start + self.dtau * np.arange(self.n_samples)


def pulse_unitary(settings: RamseySettings) -> np.ndarray:
    """The pi/2-pulse propagator under the configured model."""
    if settings.pulse_model == "exact":
        return exact_pulse_propagator(settings.pulse)
    return hard_pulse_propagator(settings.pulse)


def ramsey_unitary(settings: RamseySettings, tau: float) -> np.ndarray:
    """U_pulse @ exp(-i H_free tau) @ U_pulse for one free-evolution time."""
    if tau < 0.0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    u_p = pulse_unitary(settings)
    phases = np.exp(-1j * free_eigenvalues(settings.spin) * tau)
    return (u_p * phases[None, :]) @ u_p


def _signal_samples(
    u_p: np.ndarray,
    energies: np.ndarray,
    rho0: np.ndarray,
    support: tuple[int, ...],
    taus: np.ndarray,
) -> np.ndarray:
    """S(tau) = Tr[O U_R rho0 U_R^dag] over a tau grid, batched over tau."""
    phases = np.exp(-1j * np.outer(taus, energies))  # (n_tau, 4)
    u_r = np.matmul(u_p[None, :, :] * phases[:, None, :], u_p)  # (n_tau, 4, 4)
    rho_t = u_r @ rho0 @ u_r.conj().transpose(0, 2, 1)
    return np.real(sum(rho_t[:, k, k] for k in support))


def ramsey_signal_trace(settings: RamseySettings) -> TimeTrace:
    """Propagate the initial state through the sequence over the tau grid.

    Mixed initial states propagate as density matrices (equivalent to
    averaging the pure-component runs).  Values lie in [0, 1] up to
    floating-point roundoff.
    """
    u_p = pulse_unitary(settings)
    energies = free_eigenvalues(settings.spin)
    rho0 = settings.resolve_initial_state().density_matrix()
    taus = settings.taus
    signal = _signal_samples(u_p, energies, rho0, _OBSERVABLE_SUPPORT[settings.observable], taus)
    if settings.t2star is not None:
        mean = signal.mean()
        signal = mean + (signal - mean) * np.exp(-taus / settings.t2star)
    return TimeTrace(t0=settings.tau_start, dt=settings.dtau, samples=signal)


@dataclass(frozen=True)
class PairCoefficient:
    """One cosine term: sublevel pair, frequency Omega >= 0 (rad/us), complex weight."""

    pair: tuple[str, str]
    omega: float
    x: complex


@dataclass(frozen=True)
class SignalDecomposition:
    """Constant-plus-cosines form of a Ramsey signal for a pure initial state.

    ``reconstruct`` evaluates c0 + sum 2|X| cos(Omega tau - arg X), which
    matches the directly propagated signal pointwise when both use the
    same pulse unitary and initial state.
    """

    c0: float
    terms: tuple[PairCoefficient, ...]

    def reconstruct(self, taus: np.ndarray) -> np.ndarray:
        taus = np.asarray(taus, dtype=float)
        signal = np.full(taus.shape, self.c0)
        for term in self.terms:
            signal += 2.0 * abs(term.x) * np.cos(term.omega * taus - np.angle(term.x))
        return signal

    def coefficient(self, pair: tuple[float | str, float | str]) -> PairCoefficient:
        want = frozenset(level_index(m) for m in pair)
        for term in self.terms:
            if frozenset(level_index(m) for m in term.pair) == want:
                return term
        raise KeyError(f"no coefficient for pair {pair!r}")


def analytic_decomposition(
    pulse_u: np.ndarray,
    psi0: QuartetState,
    params: SpinParams,
    observable: str = "o2",
) -> SignalDecomposition:
    """Weights and frequencies of the six cosines for a pure initial state.

    With post-pulse amplitudes A_m = (U psi0)_m and readout amplitudes
    B_{k,m} = U_{k,m} A_m over the observable's support k, the constant is
    c0 = sum |B_{k,m}|^2 and each pair weight is X_mn = sum_k B_{k,m}
    conj(B_{k,n}) attached to Omega_mn = |E_m - E_n|.  X is conjugated
    where needed so the reconstruction cosine convention is exact.

    Raises:
        ValueError: for a mixed input state; decompose each pure component
            and combine the results linearly instead.
    """
    if not psi0.is_pure:
        raise ValueError("analytic_decomposition needs a pure initial state; "
                         "decompose mixed states per pure component and average")
    if observable not in _OBSERVABLE_SUPPORT:
        raise ValueError(f"observable must be one of {OBSERVABLES}, got {observable!r}")

    amps = pulse_u @ psi0.ket
    support = _OBSERVABLE_SUPPORT[observable]
    b = {(k, m): pulse_u[k, m] * amps[m] for k in support for m in range(4)}
    energies = free_eigenvalues(params)

    c0 = float(sum(abs(v) ** 2 for v in b.values()))
    terms = []
    for i in range(4):
        for j in range(i + 1, 4):
            x = complex(sum(b[(k, i)] * b[(k, j)].conjugate() for k in support))
            diff = energies[i] - energies[j]
            if diff < 0.0:
                x = x.conjugate()
            terms.append(
                PairCoefficient(pair=(LEVEL_LABELS[i], LEVEL_LABELS[j]), omega=abs(diff), x=x)
            )
    return SignalDecomposition(c0=c0, terms=tuple(terms))


def hard_pulse_decomposition(
    pulse: PulseParams, psi0: QuartetState, observable: str = "o2"
) -> SignalDecomposition:
    """Decomposition with the closed-form hard-pulse matrix (convenience wrapper)."""
    return analytic_decomposition(closed_form_elements(pulse), psi0, pulse.spin, observable)
