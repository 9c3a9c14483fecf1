import math
import time
from unittest import mock

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose
from scipy.optimize import minimize

from lab.choices import Method
from lab.conf import OptimizerConfig
from lab.exceptions import DimensionError
from lab.measures import (
    _overlap_with_gradient,
    capability_from_fidelity,
    entangled_overlap,
    fidelity_from_fraction,
    fully_entangled_fraction,
    negativity,
    overlap_ceiling,
    pure_concurrence,
    pure_negativity_closed_form,
    schmidt_coefficients,
    teleportation_capability,
    teleportation_fidelity,
    wootters_concurrence,
)
from lab.quantum_states import (
    Cut,
    DensityOperator,
    basis_state,
    density_from_state,
    haar_random_state,
    named_state,
    random_mixed,
)
from lab.tensor_core import hermitian_basis, unitary_from_generator

FAST = OptimizerConfig(restarts=3)


def local_unitary(d, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return unitary_from_generator(0.5 * (a + a.conj().T))


class NegativityTests(SimpleTestCase):
    def test_maximally_entangled_is_one(self):
        for d in (2, 3, 4):
            result = negativity(density_from_state(named_state('MaxEnt', d=d)))
            self.assertAlmostEqual(result.value, 1.0, delta=1e-10)
            self.assertEqual(result.method, Method.EXACT)

    def test_product_state_is_zero(self):
        self.assertAlmostEqual(negativity(density_from_state(basis_state((3, 3), (1, 2)))).value, 0.0, delta=1e-12)

    def test_ou_p_one_vs_rest(self):
        psi = named_state('Ou_p', 0.5)
        result = negativity(density_from_state(psi), Cut.of({0}, 3))
        self.assertAlmostEqual(result.value, 5 / 6, delta=1e-9)
        self.assertEqual(result.cut.label(), '1(23)')

    def test_local_unitary_invariance(self):
        rho = random_mixed((3, 3), 4, 21)
        u = np.kron(local_unitary(3, 1), local_unitary(3, 2))
        rotated = DensityOperator((3, 3), u @ rho.matrix @ u.conj().T)
        self.assertAlmostEqual(negativity(rho).value, negativity(rotated).value, delta=1e-9)


class SchmidtTests(SimpleTestCase):
    def test_product_state(self):
        assert_allclose(schmidt_coefficients(basis_state((3, 3), (0, 1))), [1, 0, 0], atol=1e-12)

    def test_maximally_entangled(self):
        assert_allclose(schmidt_coefficients(named_state('MaxEnt', d=3)), [1 / math.sqrt(3)] * 3, atol=1e-12)

    def test_normalized_and_descending(self):
        s = schmidt_coefficients(haar_random_state((3, 3, 3), 2), Cut.of({1}, 3))
        self.assertEqual(len(s), 3)
        self.assertAlmostEqual(float(np.sum(s ** 2)), 1.0, delta=1e-10)
        self.assertTrue(np.all(np.diff(s) <= 0))


class PureNegativityTests(SimpleTestCase):
    def test_endpoints(self):
        self.assertAlmostEqual(pure_negativity_closed_form(named_state('MaxEnt', d=3)), 1.0, delta=1e-12)
        self.assertAlmostEqual(pure_negativity_closed_form(basis_state((3, 3), (2, 2))), 0.0, delta=1e-12)

    def test_matches_partial_transpose(self):
        for seed in range(10):
            psi = haar_random_state((3, 3), seed)
            self.assertAlmostEqual(pure_negativity_closed_form(psi), negativity(density_from_state(psi)).value,
                                   delta=1e-9)

    def test_asymmetric_cut(self):
        psi = haar_random_state((3, 3, 3), 30)
        cut = Cut.of({2}, 3)
        self.assertAlmostEqual(pure_negativity_closed_form(psi, cut),
                               negativity(density_from_state(psi), cut).value, delta=1e-9)


class ConcurrenceTests(SimpleTestCase):
    def test_bell_state(self):
        self.assertAlmostEqual(wootters_concurrence(density_from_state(named_state('MaxEnt', d=2))).value,
                               1.0, delta=1e-9)

    def test_product_state(self):
        self.assertAlmostEqual(wootters_concurrence(density_from_state(basis_state((2, 2), (0, 1)))).value,
                               0.0, delta=1e-9)

    def test_werner_state(self):
        bell = density_from_state(named_state('MaxEnt', d=2)).matrix
        werner = DensityOperator((2, 2), 0.8 * bell + 0.2 * np.eye(4) / 4)
        self.assertAlmostEqual(wootters_concurrence(werner).value, 0.7, delta=1e-9)

    def test_pure_states_agree(self):
        for seed in range(5):
            psi = haar_random_state((2, 2), seed)
            self.assertAlmostEqual(wootters_concurrence(density_from_state(psi)).value,
                                   pure_concurrence(psi).value, delta=1e-9)

    def test_needs_two_qubits(self):
        with self.assertRaises(DimensionError):
            wootters_concurrence(density_from_state(named_state('MaxEnt', d=3)))


class FullyEntangledFractionTests(SimpleTestCase):
    def test_maximally_entangled(self):
        result = fully_entangled_fraction(density_from_state(named_state('MaxEnt', d=3)), FAST)
        self.assertAlmostEqual(result.value, 1.0, delta=1e-9)
        self.assertEqual(result.method, Method.OPTIMIZER)
        self.assertAlmostEqual(entangled_overlap(density_from_state(named_state('MaxEnt', d=3)).matrix,
                                                 result.unitary), result.value, delta=1e-12)

    def test_maximally_mixed(self):
        rho = DensityOperator((3, 3), np.eye(9) / 9)
        self.assertAlmostEqual(fully_entangled_fraction(rho, FAST).value, 1 / 9, delta=1e-8)

    def test_pure_states_reach_closed_form(self):
        for seed in range(5):
            psi = haar_random_state((3, 3), 100 + seed)
            optimum = float(np.sum(schmidt_coefficients(psi))) ** 2 / 3
            value = fully_entangled_fraction(density_from_state(psi)).value
            self.assertLessEqual(value, optimum + 1e-9)
            self.assertAlmostEqual(value, optimum, delta=1e-6)

    def test_iteration_cap_is_reported(self):
        cfg = OptimizerConfig(restarts=2, max_iterations=1)
        result = fully_entangled_fraction(density_from_state(haar_random_state((3, 3), 5)), cfg)
        self.assertEqual(result.iterations, 1)

    def test_needs_square_bipartition(self):
        with self.assertRaises(DimensionError):
            fully_entangled_fraction(density_from_state(haar_random_state((2, 3), 0)), FAST)

    def test_pure_state_stops_at_the_ceiling(self):
        psi = haar_random_state((3, 3), 7)
        rho = density_from_state(psi)
        result = fully_entangled_fraction(rho)
        self.assertAlmostEqual(result.value, overlap_ceiling(rho), delta=1e-9)
        with mock.patch('lab.measures.minimize', wraps=minimize) as search:
            fully_entangled_fraction(rho)
        self.assertLess(search.call_count, OptimizerConfig().restarts)

    def test_two_hundred_state_batches_fit_the_time_budget(self):
        started = time.perf_counter()
        for seed in range(10):
            fully_entangled_fraction(density_from_state(haar_random_state((3, 3), 400 + seed)))
            fully_entangled_fraction(random_mixed((3, 3), 1 + seed % 9, 400 + seed))
        # 20x this batch is the 200 pure plus 200 mixed states verify runs
        self.assertLess(time.perf_counter() - started, 6.0)


class OverlapCeilingTests(SimpleTestCase):
    def test_pure_state_closed_form(self):
        psi = haar_random_state((3, 3), 12)
        expected = float(np.sum(schmidt_coefficients(psi))) ** 2 / 3
        self.assertAlmostEqual(overlap_ceiling(density_from_state(psi)), expected, delta=1e-12)

    def test_bounds_the_optimum_on_mixed_states(self):
        for rank in (2, 5, 9):
            rho = random_mixed((3, 3), rank, 50 + rank)
            self.assertGreaterEqual(overlap_ceiling(rho) + 1e-12, fully_entangled_fraction(rho, FAST).value)


class OverlapGradientTests(SimpleTestCase):
    def assertGradientMatches(self, theta, rho, start):
        basis = hermitian_basis(3)
        value, gradient, u = _overlap_with_gradient(theta, rho.matrix, basis, start)
        self.assertAlmostEqual(value, entangled_overlap(rho.matrix, u), delta=1e-14)
        step = 1e-6
        for a in range(basis.shape[0]):
            shift = np.zeros_like(theta)
            shift[a] = step
            up = _overlap_with_gradient(theta + shift, rho.matrix, basis, start)[0]
            down = _overlap_with_gradient(theta - shift, rho.matrix, basis, start)[0]
            self.assertAlmostEqual(gradient[a], (up - down) / (2 * step), delta=1e-7)

    def test_at_a_generic_point(self):
        theta = np.random.default_rng(3).standard_normal(8)
        self.assertGradientMatches(theta, random_mixed((3, 3), 4, 9), local_unitary(3, 6))

    def test_at_the_origin(self):
        # all generator eigenvalues coincide here
        self.assertGradientMatches(np.zeros(8), random_mixed((3, 3), 3, 10), np.eye(3, dtype=complex))


class TeleportationMeasureTests(SimpleTestCase):
    def test_relations(self):
        self.assertAlmostEqual(fidelity_from_fraction(1 / 3, 3), 0.5)
        self.assertAlmostEqual(fidelity_from_fraction(1 / 9, 3), 1 / 3)
        self.assertEqual(capability_from_fidelity(0.5, 3), 0.0)
        self.assertAlmostEqual(capability_from_fidelity(1.0, 3), 1.0)

    def test_maximally_entangled(self):
        rho = density_from_state(named_state('MaxEnt', d=3))
        self.assertAlmostEqual(teleportation_fidelity(rho, FAST).value, 1.0, delta=1e-9)
        self.assertAlmostEqual(teleportation_capability(rho, FAST).value, 1.0, delta=1e-9)

    def test_product_state_sits_at_classical_threshold(self):
        rho = density_from_state(basis_state((3, 3), (0, 0)))
        self.assertAlmostEqual(teleportation_fidelity(rho, FAST).value, 0.5, delta=1e-9)
        self.assertAlmostEqual(teleportation_capability(rho, FAST).value, 0.0, delta=1e-9)

    def test_maximally_mixed(self):
        rho = DensityOperator((3, 3), np.eye(9) / 9)
        self.assertAlmostEqual(teleportation_fidelity(rho, FAST).value, 1 / 3, delta=1e-8)

    def test_capability_equals_negativity_on_pure_states(self):
        for seed in range(8):
            rho = density_from_state(haar_random_state((3, 3), 200 + seed))
            self.assertAlmostEqual(teleportation_capability(rho).value, negativity(rho).value, delta=1e-5)

    def test_negativity_bounds_capability_on_mixed_states(self):
        for rank in range(1, 10, 2):
            rho = random_mixed((3, 3), rank, 300 + rank)
            self.assertGreaterEqual(negativity(rho).value - teleportation_capability(rho, FAST).value, -1e-6)
