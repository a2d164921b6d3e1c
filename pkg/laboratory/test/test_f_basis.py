import numpy as np
from django.test import SimpleTestCase

from integrability.errors import DegenerateParametersError, SiteRangeError
from integrability.f_basis import (af_closed,
                                   b_site,
                                   build_f,
                                   check_closed_forms,
                                   check_commutation,
                                   check_diagonalization,
                                   check_exchange,
                                   check_factorization,
                                   check_matrix_elements,
                                   conjugate,
                                   exchange_factor,
                                   t_n_operator)
from integrability.tensor import LinearOperator, StateIndex, vacuum_state
from integrability.vertex_model import LatticeSpec, monodromy_entries, sample_lattice, sample_spectral_point
from laboratory.test.mock.lattices_mock import CLOSED_LATTICE, LATTICE_4, RATIONAL, TRIGONOMETRIC

REGIMES = (RATIONAL, TRIGONOMETRIC)


class FactorizingOperatorTestCase(SimpleTestCase):

    def test_single_site_is_identity(self):
        lattice = LatticeSpec(1, (0.3,))
        factorizing = build_f(lattice, RATIONAL)
        self.assertTrue(factorizing.F.is_close(LinearOperator.identity(1), 1e-15))

    def test_last_chain_is_identity(self):
        self.assertTrue(t_n_operator(4, LATTICE_4, RATIONAL).is_close(LinearOperator.identity(4), 1e-15))

    def test_vacuum_is_fixed(self):
        for regime in REGIMES:
            factorizing = build_f(LATTICE_4, regime)
            np.testing.assert_allclose(factorizing.F @ vacuum_state(4), vacuum_state(4), atol=1e-14)
            self.assertLess(factorizing.inverse_residual(), 1e-10)

    def test_factorization_over_adjacent_transpositions(self):
        for regime in REGIMES:
            for i in range(1, LATTICE_4.site_count):
                self.assertLess(check_factorization(LATTICE_4, regime, i), 1e-10, f"{regime}, transposition {i}")

    def test_factorization_rejects_last_site(self):
        self.assertRaises(SiteRangeError, lambda: check_factorization(LATTICE_4, RATIONAL, 4))

    def test_coinciding_inhomogeneities_make_operator_singular(self):
        self.assertRaises(DegenerateParametersError, lambda: build_f(CLOSED_LATTICE, RATIONAL))


class ClosedFormsTestCase(SimpleTestCase):
    points = (0.2 + 0.1j, 0.45 - 0.2j)

    def test_diagonal_entry(self):
        for regime in REGIMES:
            factorizing = build_f(LATTICE_4, regime)
            for t in self.points:
                self.assertLess(check_diagonalization(t, factorizing), 1e-10)
                diagonal = conjugate(monodromy_entries(t, LATTICE_4, regime).A, factorizing)
                self.assertLess((diagonal - af_closed(t, LATTICE_4, regime)).max_abs(), 1e-10)

    def test_closed_forms(self):
        for regime in REGIMES:
            factorizing = build_f(LATTICE_4, regime)
            for t in self.points:
                residuals = check_closed_forms(t, LATTICE_4, regime, factorizing)
                self.assertEqual(set(residuals), {"A", "B", "C"})
                for operator, residual in residuals.items():
                    self.assertLess(residual, 1e-10, f"{operator} at t={t} in {regime}")

    def test_single_flip_raises_only_its_site(self):
        state = b_site(2, 0.2 + 0.1j, LATTICE_4, RATIONAL) @ vacuum_state(4)
        target = StateIndex.from_occupied_sites((2,), 4)
        self.assertNotEqual(state[target], 0)
        self.assertEqual(np.count_nonzero(state), 1)

    def test_matrix_elements(self):
        for regime in REGIMES:
            self.assertLess(check_matrix_elements(LATTICE_4, regime), 1e-10)

    def test_commutation_with_diagonal_entry(self):
        for regime in REGIMES:
            self.assertLess(check_commutation(0.2 + 0.1j, 0.45 - 0.2j, LATTICE_4, regime), 1e-10)


class ExchangeTestCase(SimpleTestCase):

    def test_exchange_relation(self):
        for regime in REGIMES:
            for t in (0, 0.45 - 0.2j):
                for i in range(1, 5):
                    for j in range(1, 5):
                        if i != j:
                            self.assertLess(check_exchange(i, j, LATTICE_4, regime, t), 1e-10, f"({i}, {j}) at {t}")

    def test_exchange_factors_are_inverse(self):
        for i, j in ((1, 2), (1, 4), (3, 2)):
            product = exchange_factor(i, j, LATTICE_4, TRIGONOMETRIC) * exchange_factor(j, i, LATTICE_4, TRIGONOMETRIC)
            self.assertAlmostEqual(product, 1, places=12)

    def test_same_site_is_rejected(self):
        self.assertRaises(ValueError, lambda: check_exchange(2, 2, LATTICE_4, RATIONAL))


class RandomLatticeClosedFormsTestCase(SimpleTestCase):

    def test_closed_forms_up_to_eight_sites(self):
        rng = np.random.default_rng(41)
        for regime in REGIMES:
            for site_count in range(2, 9):
                for _ in range(10):
                    lattice = sample_lattice(site_count, regime, rng)
                    factorizing = build_f(lattice, regime)
                    for _ in range(5):
                        t = sample_spectral_point(rng, lattice, regime)
                        for operator, residual in check_closed_forms(t, lattice, regime, factorizing).items():
                            self.assertLess(residual, 1e-10, f"{operator} at t={t} on {lattice}, {regime}")

    def test_sampled_lattices_keep_the_inverse_accurate(self):
        rng = np.random.default_rng(43)
        for regime in REGIMES:
            factorizing = build_f(sample_lattice(6, regime, rng), regime)
            self.assertLess(factorizing.inverse_residual(), 1e-10)
            self.assertGreaterEqual(factorizing.condition(), 1.0)
