"""Lab-frame, rotating-frame and free-evolution Hamiltonians of the spin-3/2 manifold.

Conventions:

* The axial zero-field term enters as ``dgs * Sz^2``; the full zero-field
  splitting between the outer and inner doublets is ``2 * dgs``.
* The detuning is ``delta = omega_drive - (omega0 + 2 * dgs)``, so
  ``delta > 0`` drives above the |+3/2> <-> |+1/2> resonance, and the
  rotating frame substitutes ``omega0 - omega_drive = -(delta + 2 * dgs)``.
* The rotating and free Hamiltonians include the uniform ``-5/4 * dgs``
  level shift (i.e. they use ``Sz^2 - 5/4``), which makes their diagonal
  read, at ``omega1 = 0``,

      E(+3/2) = -3 delta/2 - 2 dgs     E(+1/2) = -delta/2 - 2 dgs
      E(-1/2) = +delta/2               E(-3/2) = +3 delta/2 + 4 dgs

  The lab-frame constructor keeps the bare ``Sz^2``.  The shift is a
  global constant either way; no signal or spectrum depends on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import spin_operators
from .units import mhz_to_angular

_SZ, _SX, _SY = spin_operators()
_SZ2_SHIFTED = _SZ @ _SZ - 1.25 * np.eye(4)
_SZ2 = _SZ @ _SZ


@dataclass(frozen=True)
class SpinParams:
    """Physical parameters of the driven spin-3/2 manifold, in rad/us.

    Attributes:
        dgs: axial zero-field parameter (half the full splitting).
        delta: drive detuning from the |+3/2> <-> |+1/2> transition.
        omega1: Rabi drive amplitude, >= 0.
        omega0: Larmor frequency; used only by the lab-frame Hamiltonian
            (the rotating frame is fully determined by delta and dgs).
    """

    dgs: float
    delta: float
    omega1: float
    omega0: float = 0.0

    def __post_init__(self):
        if self.omega1 < 0.0:
            raise ValueError(f"omega1 must be >= 0, got {self.omega1!r}")
        for name in ("dgs", "delta", "omega1", "omega0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @classmethod
    def from_mhz(
        cls,
        dgs_mhz: float,
        delta_mhz: float,
        omega1_mhz: float,
        omega0_mhz: float = 0.0,
    ) -> "SpinParams":
        """Build from interface units (ordinary frequencies in MHz)."""
        return cls(
            dgs=mhz_to_angular(dgs_mhz),
            delta=mhz_to_angular(delta_mhz),
            omega1=mhz_to_angular(omega1_mhz),
            omega0=mhz_to_angular(omega0_mhz),
        )

    @property
    def zfs_mhz(self) -> float:
        """Full zero-field splitting 2*dgs, reported in MHz."""
        from .units import angular_to_mhz

        return angular_to_mhz(2.0 * self.dgs)


def lab_hamiltonian(params: SpinParams, drive_freq: float, t: float) -> np.ndarray:
    """Lab-frame Hamiltonian omega0*Sz + dgs*Sz^2 + omega1*cos(wt)*Sx at time t.

    Housed for completeness; all dynamics in this package run in the
    rotating frame, so this matrix is never time-integrated.
    """
    return (
        params.omega0 * _SZ
        + params.dgs * _SZ2
        + params.omega1 * math.cos(drive_freq * t) * _SX
    )


def rotating_hamiltonian(params: SpinParams) -> np.ndarray:
    """Rotating-frame Hamiltonian after the rotating-wave approximation.

    -(delta + 2 dgs) Sz + dgs (Sz^2 - 5/4) + omega1 Sx, with the transverse
    couplings sqrt(3)/2 * omega1 on the outer pairs and omega1 on the
    middle pair.
    """
    return (
        -(params.delta + 2.0 * params.dgs) * _SZ
        + params.dgs * _SZ2_SHIFTED
        + params.omega1 * _SX
    )


def free_hamiltonian(params: SpinParams) -> np.ndarray:
    """Rotating-frame Hamiltonian with the drive off; exactly diagonal."""
    return np.diag(free_eigenvalues(params)).astype(complex)


def free_eigenvalues(params: SpinParams) -> np.ndarray:
    """Free-evolution level energies, labeled by sublevel (basis order, not sorted).

    Returns ``[E(+3/2), E(+1/2), E(-1/2), E(-3/2)]`` in rad/us:

        E(+3/2) = -3 delta/2 - 2 dgs,   E(+1/2) = -delta/2 - 2 dgs,
        E(-1/2) = +delta/2,             E(-3/2) = +3 delta/2 + 4 dgs.
    """
    d, dgs = params.delta, params.dgs
    return np.array(
        [
            -1.5 * d - 2.0 * dgs,
            -0.5 * d - 2.0 * dgs,
            0.5 * d,
            1.5 * d + 4.0 * dgs,
        ]
    )
