import numpy as np
import pytest

from quartetsim.core import (
    LEVELS,
    QuartetState,
    hermitian_eigendecomposition,
    level_index,
    pair_label,
    propagator,
    spin_operators,
)

SQ3 = np.sqrt(3.0)


def random_hermitian(rng, scale=1.0):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return scale * 0.5 * (a + a.conj().T)


def expm_taylor(m):
    """Independent scaling-and-squaring Taylor oracle for the matrix exponential."""
    norm = np.max(np.abs(m))
    squarings = max(0, int(np.ceil(np.log2(max(norm, 1e-300)))) + 4)
    x = m / (2.0**squarings)
    term = np.eye(4, dtype=complex)
    out = np.eye(4, dtype=complex)
    for k in range(1, 24):
        term = term @ x / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


class TestSpinOperators:
    def test_sz_diagonal(self):
        sz, _, _ = spin_operators()
        assert np.array_equal(sz, np.diag([1.5, 0.5, -0.5, -1.5]))

    def test_sx_entries(self):
        _, sx, _ = spin_operators()
        assert sx[0, 1] == pytest.approx(SQ3 / 2)
        assert sx[1, 2] == pytest.approx(1.0)
        assert np.max(np.abs(sx - sx.T)) == 0.0
        assert np.max(np.abs(sx.imag)) == 0.0

    def test_sy_pattern(self):
        _, _, sy = spin_operators()
        assert sy[0, 1] == pytest.approx(-1j * SQ3 / 2)
        assert sy[1, 0] == pytest.approx(1j * SQ3 / 2)
        assert np.max(np.abs(sy + sy.T)) == 0.0  # purely imaginary, antisymmetric
        assert np.max(np.abs(sy - sy.conj().T)) == 0.0  # Hermitian

    def test_angular_momentum_algebra(self):
        sz, sx, sy = spin_operators()
        assert np.max(np.abs(sx @ sy - sy @ sx - 1j * sz)) <= 1e-14

    def test_casimir(self):
        sz, sx, sy = spin_operators()
        s2 = sx @ sx + sy @ sy + sz @ sz
        assert np.max(np.abs(s2 - 3.75 * np.eye(4))) <= 1e-14


class TestEigendecomposition:
    def test_already_diagonal(self):
        w, v = hermitian_eigendecomposition(np.diag([1.0, 2.0, 3.0, 4.0]).astype(complex))
        assert np.array_equal(w, [1.0, 2.0, 3.0, 4.0])
        assert np.array_equal(v, np.eye(4))

    def test_sx_spectrum(self):
        # Spin operators share the spin spectrum (-3/2 .. +3/2); the
        # independent check below uses LAPACK rather than the Jacobi path.
        _, sx, _ = spin_operators()
        w, _ = hermitian_eigendecomposition(sx)
        assert np.allclose(w, [-1.5, -0.5, 0.5, 1.5], atol=1e-12)
        assert np.allclose(w, np.linalg.eigvalsh(sx), atol=1e-12)

    def test_random_reconstruction(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            m = random_hermitian(rng, scale=rng.uniform(0.1, 50.0))
            scale = np.max(np.abs(m))
            w, v = hermitian_eigendecomposition(m)
            assert np.all(np.diff(w) >= 0.0)
            assert np.max(np.abs(v.conj().T @ v - np.eye(4))) <= 1e-12
            assert np.max(np.abs((v * w) @ v.conj().T - m)) <= 1e-11 * scale
            assert np.max(np.abs(m @ v - v * w)) <= 1e-11 * scale
            # cross-check eigenvalues against an independent solver
            assert np.max(np.abs(w - np.linalg.eigvalsh(m))) <= 1e-12 * max(scale, 1.0)

    def test_degenerate_spectra(self):
        for m in (
            np.diag([2.0, 2.0, 2.0, 2.0]).astype(complex),
            np.diag([1.0, 1.0, 3.0, 3.0]).astype(complex),
            3.75 * np.eye(4, dtype=complex),
        ):
            w, v = hermitian_eigendecomposition(m)
            assert np.max(np.abs((v * w) @ v.conj().T - m)) <= 1e-11 * np.max(np.abs(m))
            assert np.max(np.abs(v.conj().T @ v - np.eye(4))) <= 1e-12

    def test_zero_matrix(self):
        w, v = hermitian_eigendecomposition(np.zeros((4, 4), dtype=complex))
        assert np.array_equal(w, np.zeros(4))
        assert np.array_equal(v, np.eye(4))

    def test_rejects_non_hermitian(self):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 1] = 1.0
        with pytest.raises(ValueError, match="not Hermitian"):
            hermitian_eigendecomposition(m)


class TestPropagator:
    def test_zero_time_is_identity(self):
        rng = np.random.default_rng(11)
        assert np.allclose(propagator(random_hermitian(rng), 0.0), np.eye(4), atol=1e-14)

    def test_diagonal_generator(self):
        eps = np.array([0.3, -1.2, 2.5, 4.0])
        u = propagator(np.diag(eps).astype(complex), 0.7)
        assert np.max(np.abs(u - np.diag(np.exp(-1j * eps * 0.7)))) <= 1e-13

    def test_unitary_and_series_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            h = random_hermitian(rng, scale=rng.uniform(0.5, 20.0))
            t = rng.uniform(-2.0, 2.0)
            u = propagator(h, t)
            assert np.max(np.abs(u.conj().T @ u - np.eye(4))) <= 1e-12
            assert np.max(np.abs(u - expm_taylor(-1j * h * t))) <= 1e-9

    def test_group_property(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            h = random_hermitian(rng, scale=5.0)
            t1, t2 = rng.uniform(-1.0, 1.0, size=2)
            lhs = propagator(h, t1) @ propagator(h, t2)
            assert np.max(np.abs(lhs - propagator(h, t1 + t2))) <= 1e-11

    def test_adjoint_reverses_time(self):
        rng = np.random.default_rng(19)
        h = random_hermitian(rng, scale=3.0)
        assert np.max(np.abs(propagator(h, 0.4).conj().T - propagator(h, -0.4))) <= 1e-12

    def test_rejects_nonfinite_time(self):
        with pytest.raises(ValueError, match="finite"):
            propagator(np.eye(4, dtype=complex), np.inf)


class TestQuartetState:
    def test_pure_normalization(self):
        state = QuartetState.pure([1.0, 0.0, 0.0, 0.0])
        assert state.is_pure
        assert np.array_equal(state.density_matrix(), np.diag([1.0, 0, 0, 0]))
        with pytest.raises(ValueError, match="not normalized"):
            QuartetState.pure([1.0, 1.0, 0.0, 0.0])

    def test_density_validation(self):
        rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        state = QuartetState.density(rho)
        assert not state.is_pure
        with pytest.raises(ValueError, match="trace"):
            QuartetState.density(0.5 * rho)
        with pytest.raises(ValueError, match="negative eigenvalue"):
            QuartetState.density(np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex))

    def test_equal_mixture(self):
        state = QuartetState.equal_mixture("+1/2", "-1/2")
        assert np.array_equal(state.density_matrix(), np.diag([0.0, 0.5, 0.5, 0.0]))

    def test_basis_level_and_labels(self):
        assert level_index("+3/2") == 0
        assert level_index(-1.5) == 3
        assert pair_label(("-1/2", "+3/2")) == "-1/2:+3/2"
        state = QuartetState.basis_level("-3/2")
        assert state.ket[3] == 1.0
        assert tuple(LEVELS) == (1.5, 0.5, -0.5, -1.5)
