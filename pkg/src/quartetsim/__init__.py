"""Ramsey interferometry simulator and spectral analyzer for a spin-3/2 qudit.

The four Zeeman sublevels of a spin-3/2 ground manifold form a natural
four-level qudit.  Short, spectrally broad pi/2 pulses seed coherences not
only on the addressed transition but also on spectator pairs, so a Ramsey
sequence produces a deterministic multi-line spectrum: one branch per
pairwise level splitting, six in total, each a linear function of the
drive detuning and folded into the first Nyquist zone by the sampling of
the free-evolution time.

Layout:

* :mod:`quartetsim.core` - 4x4 complex linear algebra, spin operators, states
* :mod:`quartetsim.hamiltonian` - lab/rotating/free Hamiltonians and energies
* :mod:`quartetsim.pulse` - exact and hard-pulse (Wigner rotation) propagators
* :mod:`quartetsim.ramsey` - sequence assembly, traces, weight decomposition
* :mod:`quartetsim.spectral` - DFT, six-branch model, folding, peak analysis
* :mod:`quartetsim.bloch` - two-level Bloch projections and trajectories
* :mod:`quartetsim.cli` - deterministic CSV/NDJSON command-line front end
"""

from .bloch import BlochVector, pair_projection, trajectory
from .core import (
    LEVEL_LABELS,
    LEVELS,
    QuartetState,
    hermitian_eigendecomposition,
    propagator,
    spin_operators,
)
from .hamiltonian import (
    SpinParams,
    free_eigenvalues,
    free_hamiltonian,
    lab_hamiltonian,
    rotating_hamiltonian,
)
from .pulse import (
    HardPulseFrame,
    PulseParams,
    closed_form_elements,
    exact_pulse_propagator,
    hard_pulse_frame,
    hard_pulse_propagator,
    resonant_pi_half_duration,
    wigner_small_d,
)
from .ramsey import (
    RamseySettings,
    SignalDecomposition,
    analytic_decomposition,
    hard_pulse_decomposition,
    observable_projector,
    pulse_unitary,
    ramsey_signal_trace,
    ramsey_unitary,
)
from .spectral import (
    BranchFrequency,
    BranchLine,
    Peak,
    Spectrum,
    SpectrumOptions,
    SweepMap,
    TimeTrace,
    assign_peaks,
    branch_frequencies,
    branch_lines,
    dft_magnitude,
    extract_peaks,
    fold_frequency,
    folded_branch_frequencies,
    sweep_map,
)

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "BranchFrequency",
    "BranchLine",
    "HardPulseFrame",
    "LEVELS",
    "LEVEL_LABELS",
    "Peak",
    "PulseParams",
    "QuartetState",
    "RamseySettings",
    "SignalDecomposition",
    "SpectrumOptions",
    "Spectrum",
    "SpinParams",
    "SweepMap",
    "TimeTrace",
    "analytic_decomposition",
    "assign_peaks",
    "branch_frequencies",
    "branch_lines",
    "closed_form_elements",
    "dft_magnitude",
    "exact_pulse_propagator",
    "extract_peaks",
    "fold_frequency",
    "folded_branch_frequencies",
    "free_eigenvalues",
    "free_hamiltonian",
    "hard_pulse_decomposition",
    "hard_pulse_frame",
    "hard_pulse_propagator",
    "hermitian_eigendecomposition",
    "lab_hamiltonian",
    "observable_projector",
    "pair_projection",
    "propagator",
    "pulse_unitary",
    "ramsey_signal_trace",
    "ramsey_unitary",
    "resonant_pi_half_duration",
    "rotating_hamiltonian",
    "spin_operators",
    "sweep_map",
    "trajectory",
    "wigner_small_d",
]
