import numpy as np
from django.test import SimpleTestCase

from integrability.bethe import (BetheRoots,
                                 SolverSettings,
                                 _follow,
                                 bae_residual,
                                 bethe_state,
                                 free_magnon_roots,
                                 quantum_numbers,
                                 solve_bae,
                                 verify_eigenstate)
from integrability.errors import DegenerateRootsError, SingularWeightError, SolverFailureError
from integrability.vertex_model import eigenvalue_lambda, sample_lattice, sample_spectral_point
from integrability.wavefunction import check_periodicity
from laboratory.test.mock.lattices_mock import (CLOSED_LATTICE,
                                                CLOSED_ROOT,
                                                LATTICE_4,
                                                RATIONAL,
                                                SPECTRAL_POINTS,
                                                TRIGONOMETRIC)
from laboratory.test.mock.systems_mock import JumpLimitedSystem


class BaeResidualTestCase(SimpleTestCase):

    def test_closed_root_solves_equations(self):
        self.assertLess(bae_residual([CLOSED_ROOT], CLOSED_LATTICE, RATIONAL)[0], 1e-14)

    def test_perturbed_root(self):
        self.assertAlmostEqual(bae_residual([0.6], CLOSED_LATTICE, RATIONAL)[0], 1.25)

    def test_no_roots(self):
        self.assertEqual(bae_residual([], LATTICE_4, RATIONAL), [])

    def test_coinciding_roots(self):
        self.assertRaises(DegenerateRootsError, lambda: bae_residual([0.3, 0.3], LATTICE_4, RATIONAL))


class QuantumNumbersTestCase(SimpleTestCase):

    def test_symmetric_packing(self):
        self.assertEqual(quantum_numbers(4, 2), (-0.5, 0.5))
        self.assertEqual(quantum_numbers(5, 1), (0.5,))
        self.assertEqual(quantum_numbers(6, 3), (-1.0, 0.0, 1.0))

    def test_full_filling_has_no_regular_start(self):
        self.assertRaises(SolverFailureError, lambda: quantum_numbers(3, 3))

    def test_free_magnon_closed_case(self):
        roots = free_magnon_roots(quantum_numbers(2, 1), CLOSED_LATTICE, RATIONAL)
        np.testing.assert_allclose(roots, [CLOSED_ROOT], atol=1e-15)


class SolverTestCase(SimpleTestCase):

    def test_closed_case(self):
        roots = solve_bae(1, CLOSED_LATTICE, RATIONAL, seed=1)
        self.assertAlmostEqual(roots.q[0], CLOSED_ROOT, places=10)
        self.assertLess(roots.residual, 1e-12)

    def test_no_roots(self):
        roots = solve_bae(0, LATTICE_4, RATIONAL, seed=1)
        self.assertEqual(roots.q, ())
        self.assertEqual(roots.residual, 0.0)

    def test_too_many_roots(self):
        self.assertRaises(ValueError, lambda: solve_bae(3, CLOSED_LATTICE, RATIONAL, seed=1))

    def test_two_roots_on_four_sites(self):
        for regime in (RATIONAL, TRIGONOMETRIC):
            roots = solve_bae(2, LATTICE_4, regime, seed=5)
            self.assertEqual(roots.M, 2)
            self.assertLess(max(bae_residual(roots.q, LATTICE_4, regime)), 1e-12)
            self.assertLess(verify_eigenstate(roots.q, LATTICE_4, regime, SPECTRAL_POINTS), 1e-9, str(regime))
            periodicity = check_periodicity(roots.q, LATTICE_4, regime)
            self.assertLess(periodicity.residual, 1e-9)

    def test_eigenstate_is_independent_of_root_order(self):
        roots = solve_bae(2, LATTICE_4, RATIONAL, seed=5)
        forward = bethe_state(roots.q, LATTICE_4, RATIONAL)
        backward = bethe_state(tuple(reversed(roots.q)), LATTICE_4, RATIONAL)
        self.assertLess(np.max(np.abs(forward - backward)) / np.max(np.abs(forward)), 1e-10)

    def test_eigenvalue_near_a_root(self):
        roots = solve_bae(2, LATTICE_4, RATIONAL, seed=5)
        self.assertRaises(SingularWeightError, lambda: eigenvalue_lambda(roots.q[0], roots.q, LATTICE_4, RATIONAL))
        self.assertLess(verify_eigenstate(roots.q, LATTICE_4, RATIONAL, [roots.q[0] + 1e-3]), 1e-6)

    def test_same_seed_same_roots(self):
        first = solve_bae(2, LATTICE_4, TRIGONOMETRIC, seed=9)
        second = solve_bae(2, LATTICE_4, TRIGONOMETRIC, seed=9)
        self.assertEqual(first.q, second.q)


class BetheRootsTestCase(SimpleTestCase):
    roots: BetheRoots

    def setUp(self) -> None:
        self.roots = BetheRoots(q=(CLOSED_ROOT,), residual=0.0, lattice=CLOSED_LATTICE, regime=RATIONAL)

    def test_document_keeps_provenance(self):
        restored = BetheRoots.from_document(self.roots.to_document())
        self.assertEqual(restored, self.roots)
        self.assertTrue(restored.matches(CLOSED_LATTICE, RATIONAL))
        self.assertFalse(restored.matches(CLOSED_LATTICE, TRIGONOMETRIC))

    def test_incomplete_document(self):
        document = self.roots.to_document()
        del document["xi"]
        self.assertRaises(ValueError, lambda: BetheRoots.from_document(document))

    def test_inconsistent_root_count(self):
        document = self.roots.to_document()
        document["M"] = 2
        self.assertRaises(ValueError, lambda: BetheRoots.from_document(document))


class SolverFailureTestCase(SimpleTestCase):

    def test_message_carries_last_steps(self):
        error = SolverFailureError("did not converge", [f"step {i}" for i in range(8)])
        self.assertIn("step 7", str(error))
        self.assertNotIn("step 2", str(error))
        self.assertEqual(len(error.trace), 8)


class ContinuationTestCase(SimpleTestCase):

    def test_failed_legs_are_refined(self):
        trace = []
        q = _follow(JumpLimitedSystem(0.3), np.zeros(1, dtype=complex), RATIONAL, SolverSettings(legs=1), "s", trace)
        np.testing.assert_allclose(q, [1.0], atol=1e-14)
        self.assertTrue(any("refined" in line for line in trace))

    def test_refinement_gives_up(self):
        system = JumpLimitedSystem(1e-4)
        self.assertRaises(SingularWeightError,
                          lambda: _follow(system, np.zeros(1, dtype=complex), RATIONAL, SolverSettings(legs=2), "s", []))
        self.assertEqual(system.fraction, 0.0)

    def test_single_coarse_leg_still_solves(self):
        roots = solve_bae(2, LATTICE_4, TRIGONOMETRIC, seed=5, settings=SolverSettings(legs=1))
        self.assertLess(roots.residual, 1e-12)


class ClosedEigenstateTestCase(SimpleTestCase):
    points = (0, 0.3, 0.7 + 0.2j)

    def test_closed_state(self):
        np.testing.assert_allclose(bethe_state([CLOSED_ROOT], CLOSED_LATTICE, RATIONAL), [0, 2, -2, 0], atol=1e-14)
        self.assertAlmostEqual(eigenvalue_lambda(0, [CLOSED_ROOT], CLOSED_LATTICE, RATIONAL), -1, places=14)

    def test_closed_root_is_an_eigenstate(self):
        self.assertLess(verify_eigenstate([CLOSED_ROOT], CLOSED_LATTICE, RATIONAL, self.points), 1e-10)

    def test_shifted_root_is_not_an_eigenstate(self):
        self.assertGreater(verify_eigenstate([0.6], CLOSED_LATTICE, RATIONAL, [0]), 1e-3)


class RandomLatticeSolverTestCase(SimpleTestCase):

    def test_solved_roots_give_eigenstates(self):
        rng = np.random.default_rng(61)
        for regime in (RATIONAL, TRIGONOMETRIC):
            for site_count in range(2, 9):
                lattice = sample_lattice(site_count, regime, rng)
                for magnon_count in range(1, min(3, site_count // 2) + 1):
                    roots = solve_bae(magnon_count, lattice, regime, seed=10 * site_count + magnon_count)
                    message = f"M={magnon_count} on {lattice}, {regime}"
                    self.assertLess(roots.residual, 1e-12, message)
                    points = [sample_spectral_point(rng, lattice, regime, avoid=roots.q) for _ in range(3)]
                    self.assertLess(verify_eigenstate(roots.q, lattice, regime, points), 1e-9, message)

    def test_periodicity_vanishes_with_the_equations(self):
        rng = np.random.default_rng(67)
        for regime in (RATIONAL, TRIGONOMETRIC):
            lattice = sample_lattice(6, regime, rng)
            roots = solve_bae(2, lattice, regime, seed=3)
            exact = check_periodicity(roots.q, lattice, regime)
            self.assertLess(exact.residual, 1e-9)
            self.assertLess(exact.bae_residual, 1e-9)
            coarse = check_periodicity((roots.q[0] + 0.1, roots.q[1]), lattice, regime)
            self.assertGreater(coarse.residual, 1e-3)
            self.assertGreater(coarse.bae_residual, 1e-3)
            for direction in (1, 1j, -1, -1j):
                previous = None
                for size in (1e-2, 1e-3, 1e-4):
                    result = check_periodicity((roots.q[0] + size * direction, roots.q[1]), lattice, regime)
                    if previous is not None:
                        # both residuals are linear in the displacement
                        self.assertTrue(5 < previous.residual / result.residual < 20, str(regime))
                        self.assertTrue(5 < previous.bae_residual / result.bae_residual < 20, str(regime))
                    previous = result
