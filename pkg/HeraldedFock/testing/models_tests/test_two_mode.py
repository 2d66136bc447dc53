import numpy as np
import unittest
from numpy.testing import assert_allclose

from HeraldedFock.core.errors import DegenerateConditioningError, InvalidParameterError
from HeraldedFock.core.params import SqueezingParam
from HeraldedFock.models.two_mode import conditional_number_distribution, two_mode_covariance, \
    split_trigger_covariance, two_mode_click_wigner, two_mode_fidelity, two_mode_fidelity_via_wigner


class TestTwoModeReference(unittest.TestCase):
    def test_closed_form_value(self):
        self.assertAlmostEqual(two_mode_fidelity(0.5), 0.48642, delta=1e-5)
        self.assertAlmostEqual(two_mode_fidelity(1e-4), 1., places=7)

    def test_phase_space_route(self):
        for r in (0.1, 0.3, 0.5, 0.7, 1.0, 1.5):
            self.assertAlmostEqual(two_mode_fidelity_via_wigner(r), two_mode_fidelity(r), delta=1e-6)

    def test_number_distribution(self):
        for r in (0.1, 0.3, 0.7):
            distribution = conditional_number_distribution(r)
            self.assertEqual(distribution[0], 0.)
            self.assertEqual(distribution[1], 0.)
            self.assertAlmostEqual(distribution[2], two_mode_fidelity(r), places=12)
            self.assertAlmostEqual(np.sum(distribution.probabilities) + distribution.tail, 1., places=12)
            self.assertLessEqual(distribution.tail, distribution.tail_bound + 1e-15)

    def test_mean_photon_number(self):
        # <n> = 2 + 3 sinh^2 r for two photons removed from a thermal trigger
        r = SqueezingParam(0.3)
        distribution = conditional_number_distribution(r, 200)
        self.assertAlmostEqual(distribution.mean(), 2 + 3 * np.sinh(0.3)**2, places=9)
        distribution = conditional_number_distribution(0.3, 200)
        self.assertTrue(np.all(np.diff(distribution.probabilities[2:60]) < 0))

    def test_mean_photon_number_from_the_wigner_function(self):
        coeffs = two_mode_click_wigner(np.arcsinh(1.))
        # <n> + 1/2 = pi int (x^2 + p^2)/2 W, in radial form pi/2 int u W(u) du
        v = 1. / coeffs.c5
        second_moment = np.pi * (coeffs.c2 * v**2 + 2 * coeffs.c3 * v**3 + 6 * coeffs.c4 * v**4) / coeffs.c1
        self.assertAlmostEqual(second_moment / 2. - 0.5, 5., places=9)

    def test_covariances(self):
        V = two_mode_covariance(0.4)
        assert_allclose(V, V.T)
        self.assertAlmostEqual(V[0, 0]**2 - V[0, 2]**2, 1., places=12)
        split = split_trigger_covariance(0.4)
        self.assertTrue(split.is_physical())
        self.assertTrue(split.has_block_structure())
        self.assertAlmostEqual(split.V11, 1 + np.sinh(0.4)**2, places=12)
        self.assertAlmostEqual(split.V13, np.sinh(0.4)**2, places=12)
        self.assertAlmostEqual(split.V15, np.sqrt(2) * np.sinh(0.4) * np.cosh(0.4), places=12)

    def test_invalid_inputs(self):
        self.assertRaises(DegenerateConditioningError, conditional_number_distribution, 0.)
        self.assertRaises(InvalidParameterError, conditional_number_distribution, -0.1)
        self.assertRaises(InvalidParameterError, conditional_number_distribution, 0.5, 1)
