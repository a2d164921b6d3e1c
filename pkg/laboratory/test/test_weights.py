import cmath
import math

import numpy as np
from django.test import SimpleTestCase

from integrability.errors import SingularWeightError
from integrability.tensor import PERMUTATION
from integrability.weights import (Regime,
                                   RegimeFamily,
                                   b_tilde,
                                   c_tilde,
                                   c_tilde_inverse,
                                   c_tilde_log_derivative,
                                   s_matrix)
from laboratory.test.mock.lattices_mock import RATIONAL, TRIGONOMETRIC


class RegimeTestCase(SimpleTestCase):

    def test_unknown_family(self):
        self.assertRaises(ValueError, lambda: Regime("elliptic", 1))

    def test_anisotropy_must_not_be_a_zero_of_phi(self):
        self.assertRaises(ValueError, lambda: Regime(RegimeFamily.rational, 0))
        self.assertRaises(ValueError, lambda: Regime(RegimeFamily.trigonometric, math.pi))

    def test_phi(self):
        self.assertEqual(RATIONAL.phi(0.3), 0.3)
        self.assertAlmostEqual(TRIGONOMETRIC.phi(0.3), math.sin(0.3))


class WeightsTestCase(SimpleTestCase):

    def test_rational_values(self):
        self.assertAlmostEqual(c_tilde(-0.5, RATIONAL), -1)
        self.assertAlmostEqual(b_tilde(-0.5, RATIONAL), 2)
        self.assertAlmostEqual(c_tilde_inverse(-0.5, RATIONAL), -1)

    def test_trigonometric_values(self):
        t = 0.3 + 0.2j
        eta = TRIGONOMETRIC.eta
        self.assertAlmostEqual(c_tilde(t, TRIGONOMETRIC), cmath.sin(t) / cmath.sin(t + eta))
        self.assertAlmostEqual(b_tilde(t, TRIGONOMETRIC), cmath.sin(eta) / cmath.sin(t + eta))

    def test_poles_raise(self):
        self.assertRaises(SingularWeightError, lambda: c_tilde(-1, RATIONAL))
        self.assertRaises(SingularWeightError, lambda: b_tilde(-1, RATIONAL))
        self.assertRaises(SingularWeightError, lambda: c_tilde_inverse(0, RATIONAL))

    def test_log_derivative_matches_finite_difference(self):
        step = 1e-6
        for regime in (RATIONAL, TRIGONOMETRIC):
            t = 0.3 + 0.1j
            numeric = (cmath.log(c_tilde(t + step, regime)) - cmath.log(c_tilde(t - step, regime))) / (2 * step)
            self.assertAlmostEqual(c_tilde_log_derivative(t, regime), numeric, places=6)

    def test_weights_at_coinciding_arguments_give_permutation(self):
        for regime in (RATIONAL, TRIGONOMETRIC):
            np.testing.assert_allclose(s_matrix(0.2 + 0.1j, 0.2 + 0.1j, regime), PERMUTATION, atol=1e-15)

    def test_weight_matrix_layout(self):
        matrix = s_matrix(-0.5, 0, RATIONAL)
        self.assertEqual(matrix[0, 0], 1)
        self.assertEqual(matrix[3, 3], 1)
        self.assertAlmostEqual(matrix[1, 1], -1)
        self.assertAlmostEqual(matrix[1, 2], 2)
        self.assertAlmostEqual(matrix[2, 1], 2)
