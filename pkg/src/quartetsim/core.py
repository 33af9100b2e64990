"""Dense complex 4x4 linear algebra and the spin-3/2 operator algebra.

Everything acts on the four-level manifold in the fixed ordered basis

    {|+3/2>, |+1/2>, |-1/2>, |-3/2>}

so matrix index 0 is m = +3/2 and index 3 is m = -3/2.  All operations are
pure functions of their inputs; nothing here holds mutable state.
"""

from __future__ import annotations

import math

import numpy as np

#: Magnetic quantum numbers in basis order.
LEVELS: tuple[float, float, float, float] = (1.5, 0.5, -0.5, -1.5)

#: Interface labels for the sublevels, same order as :data:`LEVELS`.
LEVEL_LABELS: tuple[str, str, str, str] = ("+3/2", "+1/2", "-1/2", "-3/2")

# Fixed tolerances (not configurable, so test expectations stay stable).
HERMITICITY_TOL = 1e-10
JACOBI_OFFDIAG_TOL = 1e-14
STATE_NORM_TOL = 1e-12
DENSITY_EIGENVALUE_FLOOR = -1e-10

_SQRT3 = math.sqrt(3.0)


def level_index(level: float | str) -> int:
    """Map a sublevel (quantum number or label like ``"+1/2"``) to its basis index."""
    if isinstance(level, str):
        try:
            return LEVEL_LABELS.index(level)
        except ValueError:
            raise ValueError(f"unknown sublevel label {level!r}; expected one of {LEVEL_LABELS}") from None
    for i, m in enumerate(LEVELS):
        if abs(level - m) < 1e-9:
            return i
    raise ValueError(f"unknown sublevel {level!r}; expected one of {LEVELS}")


def level_label(level: float | str) -> str:
    return LEVEL_LABELS[level_index(level)]


def pair_indices(pair: tuple[float | str, float | str]) -> tuple[int, int]:
    """Basis indices of an (m, n) sublevel pair, preserving the given order."""
    i, j = level_index(pair[0]), level_index(pair[1])
    if i == j:
        raise ValueError(f"sublevel pair must contain two distinct levels, got {pair!r}")
    return i, j


def pair_label(pair: tuple[float | str, float | str]) -> str:
    """Colon-separated interface label for a sublevel pair, e.g. ``"+1/2:+3/2"``."""
    i, j = pair_indices(pair)
    return f"{LEVEL_LABELS[i]}:{LEVEL_LABELS[j]}"


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def spin_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin-3/2 operators (Sz, Sx, Sy) in the fixed basis order.

    Sz is diagonal with entries (3/2, 1/2, -1/2, -3/2).  Sx is real
    symmetric tridiagonal with off-diagonals (sqrt(3)/2, 1, sqrt(3)/2);
    the outer pairs couple more weakly than the middle pair.  Sy is the
    anti-symmetric imaginary counterpart, so that [Sx, Sy] = i Sz.
    """
    sz = np.diag([1.5, 0.5, -0.5, -1.5]).astype(complex)
    sx = 0.5 * np.array(
        [
            [0.0, _SQRT3, 0.0, 0.0],
            [_SQRT3, 0.0, 2.0, 0.0],
            [0.0, 2.0, 0.0, _SQRT3],
            [0.0, 0.0, _SQRT3, 0.0],
        ],
        dtype=complex,
    )
    sy = (1.0 / 2.0j) * np.array(
        [
            [0.0, _SQRT3, 0.0, 0.0],
            [-_SQRT3, 0.0, 2.0, 0.0],
            [0.0, -2.0, 0.0, _SQRT3],
            [0.0, 0.0, -_SQRT3, 0.0],
        ],
        dtype=complex,
    )
    return sz, sx, sy


def _check_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    scale = float(np.max(np.abs(m)))
    residual = float(np.max(np.abs(m - m.conj().T)))
    if residual > tol * max(scale, 1.0):
        raise ValueError(
            f"matrix is not Hermitian: max |M - M^dag| = {residual:.3e} "
            f"exceeds {tol:.1e} * max(|M|, 1) = {tol * max(scale, 1.0):.3e}"
        )
    # Fold the (tiny) anti-Hermitian residual away so downstream algebra
    # sees an exactly Hermitian matrix.
    return 0.5 * (m + m.conj().T)


def hermitian_eigendecomposition(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a 4x4 Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` sorted ascending and unitary
    ``v`` whose columns are the eigenvectors, so ``matrix @ v == v @ diag(w)``.
    The sweep stops once every off-diagonal magnitude drops below
    1e-14 * max|M|.  Within numerically degenerate eigenvalue groups the
    columns are ordered by the index of their largest-magnitude component,
    and each column's phase is fixed so that component is real positive;
    any orthonormal basis of a degenerate block is equally valid downstream.

    Raises:
        ValueError: if the input is not Hermitian to 1e-10 (relative).
    """
    a = _check_hermitian(matrix)
    scale = float(np.max(np.abs(a)))
    v = np.eye(4, dtype=complex)
    if scale == 0.0:
        return np.zeros(4), v

    threshold = JACOBI_OFFDIAG_TOL * scale
    for _ in range(60):
        off = max(abs(a[p, q]) for p in range(3) for q in range(p + 1, 4))
        if off <= threshold:
            break
        for p in range(3):
            for q in range(p + 1, 4):
                h = abs(a[p, q])
                if h <= threshold:
                    continue
                phase = a[p, q] / h
                zeta = (a[p, p].real - a[q, q].real) / (2.0 * h)
                if zeta == 0.0:
                    t = 1.0
                else:
                    t = 1.0 / (zeta + math.copysign(math.sqrt(1.0 + zeta * zeta), zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # 2x2 unitary that zeroes a[p, q]: phase removal followed by
                # a real Givens rotation.
                j = np.array([[c, -s], [s * phase.conjugate(), c * phase.conjugate()]])
                a[:, (p, q)] = a[:, (p, q)] @ j
                a[(p, q), :] = j.conj().T @ a[(p, q), :]
                v[:, (p, q)] = v[:, (p, q)] @ j
                a[p, q] = 0.0
                a[q, p] = 0.0

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]

    # Deterministic ordering inside degenerate groups: by the basis index of
    # the largest-magnitude component.
    tie_tol = 1e-12 * max(scale, 1.0)
    i = 0
    while i < 4:
        j = i + 1
        while j < 4 and w[j] - w[i] <= tie_tol:
            j += 1
        if j - i > 1:
            cols = sorted(range(i, j), key=lambda k: int(np.argmax(np.abs(v[:, k]))))
            v[:, i:j] = v[:, cols]
        i = j

    # Phase gauge: make each column's largest-magnitude component real positive.
    for k in range(4):
        idx = int(np.argmax(np.abs(v[:, k])))
        pivot = v[idx, k]
        if abs(pivot) > 0.0:
            v[:, k] *= pivot.conjugate() / abs(pivot)
    return w, v


def propagator(hamiltonian: np.ndarray, t: float) -> np.ndarray:
    """Unitary exp(-i H t) for a Hermitian H, via exact eigendecomposition.

    ``t`` may be zero or negative; it must be finite.  The result is unitary
    to 1e-12 in the max norm.
    """
    if not math.isfinite(t):
        raise ValueError(f"propagation time must be finite, got {t!r}")
    w, v = hermitian_eigendecomposition(hamiltonian)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


class QuartetState:
    """Pure ket or density matrix over the ordered four-level basis.

    Construct through :meth:`pure`, :meth:`density`, :meth:`basis_level`
    or :meth:`equal_mixture`; inputs are validated (normalization,
    Hermiticity, positivity) on construction.
    """

    __slots__ = ("_ket", "_rho")

    def __init__(self, ket: np.ndarray | None, rho: np.ndarray | None):
        self._ket = ket
        self._rho = rho

    @classmethod
    def pure(cls, amplitudes: np.ndarray) -> "QuartetState":
        """Pure state from four complex amplitudes (must be normalized to 1e-12)."""
        ket = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if ket.shape != (4,):
            raise ValueError(f"a pure state needs 4 amplitudes, got shape {ket.shape}")
        norm_sq = float(np.sum(np.abs(ket) ** 2))
        if abs(norm_sq - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"pure state is not normalized: sum |c_k|^2 = {norm_sq!r}")
        return cls(ket.copy(), None)

    @classmethod
    def density(cls, matrix: np.ndarray) -> "QuartetState":
        """Density matrix: Hermitian, unit trace, eigenvalues >= -1e-10."""
        rho = _check_hermitian(np.asarray(matrix, dtype=complex), tol=1e-12)
        tr = float(np.real(np.trace(rho)))
        if abs(tr - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        w, _ = hermitian_eigendecomposition(rho)
        if float(w[0]) < DENSITY_EIGENVALUE_FLOOR:
            raise ValueError(f"density matrix has a negative eigenvalue: {float(w[0]):.3e}")
        return cls(None, rho)

    @classmethod
    def basis_level(cls, level: float | str) -> "QuartetState":
        ket = np.zeros(4, dtype=complex)
        ket[level_index(level)] = 1.0
        return cls(ket, None)

    @classmethod
    def equal_mixture(cls, *levels: float | str) -> "QuartetState":
        """Statistical equal mixture of the given sublevels."""
        if not levels:
            raise ValueError("equal_mixture needs at least one sublevel")
        rho = np.zeros((4, 4), dtype=complex)
        for level in levels:
            rho[level_index(level), level_index(level)] += 1.0 / len(levels)
        return cls(None, rho)

    @property
    def is_pure(self) -> bool:
        return self._ket is not None

    @property
    def ket(self) -> np.ndarray:
        if self._ket is None:
            raise ValueError("state is a density matrix, not a pure ket")
        return self._ket.copy()

    def density_matrix(self) -> np.ndarray:
        if self._ket is not None:
            return np.outer(self._ket, self._ket.conj())
        return self._rho.copy()
