from dataclasses import replace

import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from lab.conf import get_tolerances
from lab.exceptions import ConvergenceError, DimensionError, NonFiniteError, NonHermitianError
from lab.tensor_core import (
    as_matrix,
    hermitian_basis,
    hermitian_dilation,
    hermitian_eig,
    is_unitary,
    kron,
    singular_values,
    trace_norm_hermitian,
    unitary_from_generator,
)

entries = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False, allow_subnormal=False)


@st.composite
def hermitian_matrices(draw, max_size=12):
    n = draw(st.integers(min_value=1, max_value=max_size))
    re = draw(arrays(np.float64, (n, n), elements=entries))
    im = draw(arrays(np.float64, (n, n), elements=entries))
    a = re + 1j * im
    return 0.5 * (a + a.conj().T)


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


class KronTests(SimpleTestCase):
    def test_identities(self):
        assert_allclose(kron(np.eye(2), np.eye(3)), np.eye(6))

    def test_basis_projectors(self):
        p0 = np.diag([1.0, 0.0])
        p1 = np.diag([0.0, 1.0])
        expected = np.zeros((4, 4))
        expected[1, 1] = 1.0
        assert_allclose(kron(p0, p1), expected)

    def test_trace_is_multiplicative(self):
        a, b = random_hermitian(3, 1), random_hermitian(3, 2)
        self.assertAlmostEqual(np.trace(kron(a, b)), np.trace(a) * np.trace(b), delta=1e-12)

    def test_associative_on_integer_matrices(self):
        rng = np.random.default_rng(3)
        a, b, c = (rng.integers(-5, 5, size=(2, 2)) for _ in range(3))
        np.testing.assert_array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))

    @override_settings(LAB_MAX_DIMENSION=8)
    def test_dimension_cap(self):
        with self.assertRaises(DimensionError):
            kron(np.eye(3), np.eye(3))


class ValidationTests(SimpleTestCase):
    def test_rejects_non_finite(self):
        with self.assertRaises(NonFiniteError):
            as_matrix(np.array([[1.0, np.nan], [0.0, 1.0]]))

    def test_rejects_vectors(self):
        with self.assertRaises(DimensionError):
            as_matrix(np.ones(3))

    def test_rejects_non_hermitian(self):
        with self.assertRaises(NonHermitianError):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class HermitianEigTests(SimpleTestCase):
    def test_diagonal_input(self):
        eig = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
        assert_allclose(eig.eigenvalues, [1.0, 2.0, 3.0])
        assert_allclose(np.abs(eig.eigenvectors), np.eye(3)[:, [1, 2, 0]])

    def test_pauli_spectra(self):
        for m in ([[0, 1], [1, 0]], [[0, -1j], [1j, 0]]):
            assert_allclose(hermitian_eig(np.array(m)).eigenvalues, [-1.0, 1.0], atol=1e-14)

    def test_27_dimensional_reconstruction(self):
        h = random_hermitian(27, 7)
        eig = hermitian_eig(h, method='jacobi')
        v = eig.eigenvectors
        self.assertLess(np.linalg.norm(eig.reconstruct() - h) / np.linalg.norm(h), 1e-9)
        self.assertLess(np.max(np.abs(v.conj().T @ v - np.eye(27))), 1e-10)
        assert_allclose(eig.eigenvalues, np.linalg.eigvalsh(h), atol=1e-9)
        self.assertGreater(eig.sweeps, 0)

    def test_lapack_and_jacobi_agree(self):
        h = random_hermitian(9, 8)
        assert_allclose(hermitian_eig(h, method='jacobi').eigenvalues,
                        hermitian_eig(h, method='lapack').eigenvalues, atol=1e-10)

    def test_sweep_cap_raises_with_sweep_count(self):
        capped = replace(get_tolerances(), eigen_max_sweeps=1)
        with self.assertRaises(ConvergenceError) as ctx:
            hermitian_eig(random_hermitian(20, 11), method='jacobi', tol=capped)
        self.assertEqual(ctx.exception.sweeps, 1)
        self.assertGreater(ctx.exception.off_norm, 0.0)
        self.assertIn('after 1 sweeps', str(ctx.exception))

    def test_sweep_cap_does_not_affect_lapack(self):
        capped = replace(get_tolerances(), eigen_max_sweeps=1)
        h = random_hermitian(20, 11)
        eig = hermitian_eig(h, method='lapack', tol=capped)
        assert_allclose(eig.eigenvalues, np.linalg.eigvalsh(h), atol=1e-12)

    def test_unknown_method(self):
        with self.assertRaises(ValueError):
            hermitian_eig(np.eye(2), method='qr')

    @settings(max_examples=60, deadline=None)
    @given(hermitian_matrices())
    def test_decomposition_invariants(self, h):
        eig = hermitian_eig(h, method='jacobi')
        n = h.shape[0]
        scale = max(np.linalg.norm(h), 1.0)
        self.assertTrue(np.all(np.diff(eig.eigenvalues) >= 0))
        self.assertLess(np.max(np.abs(eig.eigenvectors.conj().T @ eig.eigenvectors - np.eye(n))), 1e-10)
        self.assertLess(np.linalg.norm(h @ eig.eigenvectors - eig.eigenvectors * eig.eigenvalues), 1e-9 * scale)

    @settings(max_examples=40, deadline=None)
    @given(hermitian_matrices())
    def test_trace_norm_bounds_trace(self, h):
        self.assertGreaterEqual(trace_norm_hermitian(h) + 1e-9, abs(np.trace(h).real))


class TraceNormTests(SimpleTestCase):
    def test_zero_matrix(self):
        self.assertEqual(trace_norm_hermitian(np.zeros((3, 3))), 0.0)

    def test_psd_matrix_equals_trace(self):
        a = random_hermitian(5, 4)
        psd = a @ a.conj().T
        self.assertAlmostEqual(trace_norm_hermitian(psd), np.trace(psd).real, delta=1e-9)


class UnitaryTests(SimpleTestCase):
    def test_zero_generator(self):
        assert_allclose(unitary_from_generator(np.zeros((3, 3))), np.eye(3), atol=1e-15)

    def test_phase_flip(self):
        h = np.diag([np.pi, 0.0, 0.0])
        assert_allclose(unitary_from_generator(h), np.diag([-1.0, 1.0, 1.0]), atol=1e-12)

    def test_random_generator_is_unitary_and_inverted_by_negation(self):
        h = random_hermitian(6, 5)
        u = unitary_from_generator(h)
        self.assertTrue(is_unitary(u))
        assert_allclose(u @ unitary_from_generator(-h), np.eye(6), atol=1e-9)

    def test_generators_of_su_d(self):
        basis = hermitian_basis(3)
        self.assertEqual(basis.shape, (8, 3, 3))
        for g in basis:
            self.assertAlmostEqual(abs(np.trace(g)), 0.0, delta=1e-14)
            assert_allclose(g, g.conj().T)
        # orthogonal under the Hilbert-Schmidt product, normalized to tr(G_a G_b) = 2 delta_ab
        gram = np.einsum('aij,bji->ab', basis, basis).real
        assert_allclose(gram, 2 * np.eye(8), atol=1e-12)


class SingularValueTests(SimpleTestCase):
    def test_matches_lapack_svd(self):
        rng = np.random.default_rng(11)
        m = rng.standard_normal((3, 9)) + 1j * rng.standard_normal((3, 9))
        assert_allclose(singular_values(m), np.linalg.svd(m, compute_uv=False), atol=1e-10)

    def test_dilation_layout(self):
        m = np.array([[1.0, 2.0]])
        d = hermitian_dilation(m)
        self.assertEqual(d.shape, (3, 3))
        assert_allclose(d, d.conj().T)
        assert_allclose(singular_values(m), [np.sqrt(5.0)])

    def test_tall_and_wide_agree(self):
        rng = np.random.default_rng(12)
        m = rng.standard_normal((9, 3)) + 1j * rng.standard_normal((9, 3))
        assert_allclose(singular_values(m), np.linalg.svd(m, compute_uv=False), atol=1e-10)
        assert_allclose(singular_values(m.conj().T), singular_values(m), atol=1e-12)

    def test_rank_deficient_rectangle_keeps_exact_zeros(self):
        m = np.zeros((3, 9))
        m[0, 4] = 1.0
        assert_allclose(singular_values(m), [1.0, 0.0, 0.0], atol=1e-15)
