"""Fourier analysis of Ramsey traces and the six-branch frequency model.

The free evolution of the four-level manifold exposes six pairwise level
splittings.  As linear functions of the detuning delta they form six
branches, here labeled 1..6 by ascending frequency at small positive
detuning:

    id  pair            slope  intercept   |Omega(delta)|
    1   (+1/2, +3/2)      1       0        |delta|
    2   (-1/2, +1/2)      1     2 dgs      |delta + 2 dgs|
    3   (-1/2, +3/2)      2     2 dgs      |2 delta + 2 dgs|
    4   (-1/2, -3/2)      1     4 dgs      |delta + 4 dgs|
    5   (-3/2, +1/2)      2     6 dgs      |2 delta + 6 dgs|
    6   (-3/2, +3/2)      3     6 dgs      |3 delta + 6 dgs|

Uniform sampling at rate f_s folds every branch into the first Nyquist
zone [0, f_s/2]; the alias map is |f - f_s * round(f / f_s)|, which
reproduces each mirror reflection at the zone boundary and keeps branch
identities continuous through the folds.

Spectral frequencies are ordinary (cycles per us = MHz); times are us.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import SpinParams, free_eigenvalues
from .units import angular_to_mhz


@dataclass(frozen=True)
class TimeTrace:
    """Uniformly sampled real signal: start time t0, step dt (us), samples."""

    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"dt must be finite and > 0, got {self.dt!r}")
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError("a time trace needs at least 2 samples")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    @property
    def sampling_frequency_mhz(self) -> float:
        return 1.0 / self.dt

    @property
    def nyquist_mhz(self) -> float:
        return 0.5 / self.dt


@dataclass(frozen=True)
class SpectrumOptions:
    """DFT pipeline switches.

    Mean subtraction removes the DC term so low-frequency branches are not
    swamped; the Hann window and 4x zero-padding are display/peak-picking
    defaults.  Invariant-style checks should pass ``window="none"`` and
    ``zero_pad=1`` to get the bare transform.
    """

    mean_subtract: bool = True
    window: str = "hann"
    zero_pad: int = 4

    def __post_init__(self):
        if self.window not in ("none", "hann"):
            raise ValueError(f"window must be 'none' or 'hann', got {self.window!r}")
        if int(self.zero_pad) != self.zero_pad or self.zero_pad < 1:
            raise ValueError(f"zero_pad must be an integer >= 1, got {self.zero_pad!r}")


@dataclass(frozen=True)
class Spectrum:
    """One-sided magnitude spectrum over [0, f_N], bin spacing df in MHz."""

    df: float
    magnitudes: np.ndarray
    options: SpectrumOptions

    @property
    def frequencies(self) -> np.ndarray:
        return self.df * np.arange(self.magnitudes.size)


def dft_magnitude(trace: TimeTrace, options: SpectrumOptions | None = None) -> Spectrum:
    """Magnitude of the DFT of an (optionally mean-subtracted, windowed,
    zero-padded) trace, restricted to the first Nyquist zone.

    Output is deterministic and bit-identical for identical inputs.
    """
    opts = options if options is not None else SpectrumOptions()
    x = trace.samples.astype(float)
    if opts.mean_subtract:
        x = x - x.mean()
    if opts.window == "hann":
        x = x * np.hanning(x.size)
    n_padded = x.size * int(opts.zero_pad)
    mags = np.abs(np.fft.rfft(x, n=n_padded))
    df = 1.0 / (n_padded * trace.dt)
    return Spectrum(df=df, magnitudes=mags, options=opts)


# --- analytic branches ------------------------------------------------------

#: (branch id, pair (m, n), slope, intercept multiple of dgs)
_BRANCH_TABLE: tuple[tuple[int, tuple[str, str], int, int], ...] = (
    (1, ("+1/2", "+3/2"), 1, 0),
    (2, ("-1/2", "+1/2"), 1, 2),
    (3, ("-1/2", "+3/2"), 2, 2),
    (4, ("-1/2", "-3/2"), 1, 4),
    (5, ("-3/2", "+1/2"), 2, 6),
    (6, ("-3/2", "+3/2"), 3, 6),
)


@dataclass(frozen=True)
class BranchLine:
    """One analytic branch: |slope * delta + intercept| versus detuning.

    ``intercept`` is in rad/us (a multiple of dgs); ``frequency`` evaluates
    in rad/us, ``frequency_mhz`` in interface units.
    """

    branch_id: int
    pair: tuple[str, str]
    slope: int
    intercept: float

    def frequency(self, delta: float) -> float:
        return abs(self.slope * delta + self.intercept)

    def frequency_mhz(self, delta_mhz: float) -> float:
        return abs(self.slope * delta_mhz + angular_to_mhz(self.intercept))


@dataclass(frozen=True)
class BranchFrequency:
    """A branch evaluated at one detuning; frequency is unfolded, in MHz."""

    line: BranchLine
    freq_mhz: float


def branch_lines(dgs: float) -> tuple[BranchLine, ...]:
    """The six branch lines for a given zero-field parameter (rad/us)."""
    return tuple(
        BranchLine(branch_id=bid, pair=pair, slope=slope, intercept=mult * dgs)
        for bid, pair, slope, mult in _BRANCH_TABLE
    )


def branch_frequencies(params: SpinParams) -> tuple[BranchFrequency, ...]:
    """Unfolded branch frequencies (MHz) at the given detuning, id order 1..6.

    As a multiset these equal the pairwise differences |E_m - E_n| of the
    free-evolution energies.
    """
    return tuple(
        BranchFrequency(line=line, freq_mhz=angular_to_mhz(line.frequency(params.delta)))
        for line in branch_lines(params.dgs)
    )


def eigenvalue_pair_differences(params: SpinParams) -> np.ndarray:
    """All |E_m - E_n| for m < n, in MHz; independent cross-check of the branches."""
    e = free_eigenvalues(params)
    return np.array(
        [angular_to_mhz(abs(e[i] - e[j])) for i in range(4) for j in range(i + 1, 4)]
    )


def fold_frequency(f: float, f_s: float) -> float:
    """Alias a nonnegative frequency into the first Nyquist zone [0, f_s/2]."""
    if f < 0.0:
        raise ValueError(f"frequency must be >= 0, got {f!r}")
    if f_s <= 0.0:
        raise ValueError(f"sampling frequency must be > 0, got {f_s!r}")
    return abs(f - f_s * round(f / f_s))


def folded_branch_frequencies(params: SpinParams, f_s_mhz: float) -> tuple[BranchFrequency, ...]:
    """Branch frequencies aliased into [0, f_s/2]."""
    return tuple(
        BranchFrequency(line=bf.line, freq_mhz=fold_frequency(bf.freq_mhz, f_s_mhz))
        for bf in branch_frequencies(params)
    )


# --- peak extraction and assignment -----------------------------------------


@dataclass(frozen=True)
class Peak:
    """A local spectral maximum refined by three-point parabolic interpolation."""

    frequency: float
    magnitude: float
    bin_index: int


def extract_peaks(
    spectrum: Spectrum,
    min_prominence: float = 0.05,
    min_separation: float = 0.0,
) -> list[Peak]:
    """Local maxima above ``min_prominence * max(magnitudes)``.

    Peaks closer than ``min_separation`` (MHz) to a stronger peak are
    dropped.  Each surviving maximum is refined by fitting a parabola to
    the three bins around it.  Returned sorted by descending magnitude.
    """
    mags = spectrum.magnitudes
    top = float(mags.max(initial=0.0))
    if top <= 0.0:
        return []
    threshold = min_prominence * top

    candidates = []
    for i in range(1, mags.size - 1):
        if mags[i] > mags[i - 1] and mags[i] >= mags[i + 1] and mags[i] >= threshold:
            candidates.append(i)

    peaks: list[Peak] = []
    for i in sorted(candidates, key=lambda k: (-mags[k], k)):
        f_bin = i * spectrum.df
        if any(abs(f_bin - p.bin_index * spectrum.df) < min_separation for p in peaks):
            continue
        a, b, c = mags[i - 1], mags[i], mags[i + 1]
        denom = a - 2.0 * b + c
        shift = 0.0 if denom == 0.0 else 0.5 * (a - c) / denom
        shift = min(0.5, max(-0.5, shift))
        freq = (i + shift) * spectrum.df
        height = b - 0.25 * (a - c) * shift
        peaks.append(Peak(frequency=freq, magnitude=float(height), bin_index=i))
    peaks.sort(key=lambda p: (-p.magnitude, p.bin_index))
    return peaks


@dataclass(frozen=True)
class BranchMatch:
    branch_id: int
    residual: float


@dataclass(frozen=True)
class PeakAssignment:
    """All folded branches within tolerance of a peak, nearest first.

    ``matches`` is empty for an unassigned peak.  Several matches appear
    when branches are degenerate at the given detuning; no tie-break is
    applied.
    """

    peak: Peak
    matches: tuple[BranchMatch, ...] = field(default_factory=tuple)


def assign_peaks(
    peaks: list[Peak],
    folded_branches: tuple[BranchFrequency, ...],
    tolerance: float,
) -> list[PeakAssignment]:
    """Match each peak to every folded branch within ``tolerance`` MHz."""
    if tolerance <= 0.0:
        raise ValueError(f"tolerance must be > 0, got {tolerance!r}")
    out = []
    for peak in peaks:
        matches = [
            BranchMatch(branch_id=bf.line.branch_id, residual=peak.frequency - bf.freq_mhz)
            for bf in folded_branches
            if abs(peak.frequency - bf.freq_mhz) <= tolerance
        ]
        matches.sort(key=lambda m: (abs(m.residual), m.branch_id))
        out.append(PeakAssignment(peak=peak, matches=tuple(matches)))
    return out


# --- detuning sweep ----------------------------------------------------------


@dataclass(frozen=True)
class SweepMap:
    """Spectra versus detuning: deltas in rad/us ascending, one spectrum row each."""

    deltas: np.ndarray
    freq_mhz: np.ndarray
    magnitudes: np.ndarray  # shape (n_delta, n_bins)


def sweep_map(
    deltas,
    settings,
    options: SpectrumOptions | None = None,
    workers: int = 1,
) -> SweepMap:
    """Run the trace -> spectrum pipeline for every detuning in ``deltas``.

    All other settings are held fixed.  Points are independent; with
    ``workers > 1`` they are evaluated in a thread pool and assembled in
    input order, so the result is identical for any worker count.
    """
    from . import ramsey  # imported here to avoid an import cycle

    deltas = np.asarray(deltas, dtype=float)
    if deltas.ndim != 1 or deltas.size == 0:
        raise ValueError("deltas must be a non-empty 1-D sequence")

    def one_point(delta: float) -> Spectrum:
        point = settings.with_delta(delta)
        return dft_magnitude(ramsey.ramsey_signal_trace(point), options)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            spectra = list(pool.map(one_point, deltas))
    else:
        spectra = [one_point(d) for d in deltas]

    return SweepMap(
        deltas=deltas.copy(),
        freq_mhz=spectra[0].frequencies,
        magnitudes=np.vstack([s.magnitudes for s in spectra]),
    )
