import math

import numpy as np
import unittest
from numpy.testing import assert_allclose

from HeraldedFock.core.errors import InvalidParameterError, PermanentSizeError
from HeraldedFock.core.params import ClickTimes
from HeraldedFock.models.correlation import g_mode, overlap
from HeraldedFock.models.fock import permanent, permanent_naive, NPhotonState, fidelity_n, \
    two_click_state_decomposition, ab_modes, solve_coefficients, closed_form_two, \
    closed_form_solution, three_photon_fidelity_curve, n_photon_fidelity_curve, \
    two_click_decomposition_curve


class TestPermanent(unittest.TestCase):
    def test_small_cases(self):
        self.assertEqual(permanent(np.eye(3)), 1.)
        self.assertAlmostEqual(permanent(np.ones((3, 3))), 6., places=12)
        self.assertAlmostEqual(permanent([[1., 0.3], [0.3, 1.]]), 1.09, places=14)
        self.assertEqual(permanent(np.zeros((0, 0))), 1.)

    def test_against_permutation_sum(self):
        rng = np.random.RandomState(7)
        for n in range(1, 7):
            M = rng.uniform(-1, 1, (n, n))
            self.assertAlmostEqual(permanent(M), permanent_naive(M), places=12)

    def test_size_limit(self):
        self.assertRaises(PermanentSizeError, permanent, np.ones((13, 13)))
        self.assertRaises(ValueError, permanent, np.ones((2, 3)))


class TestNPhotonFidelity(unittest.TestCase):
    def test_two_photons_in_g1(self):
        clicks = ClickTimes([0., 0.])
        f = g_mode(0., 1.)
        self.assertAlmostEqual(fidelity_n(clicks, f), 1., delta=1e-4)

    def test_fa_fidelity(self):
        for dt in (0.5, 2., 8.):
            clicks = ClickTimes([0., dt])
            I12 = overlap(0., dt, 1.)
            f_a, f_b = ab_modes(clicks)
            self.assertAlmostEqual(fidelity_n(clicks, f_a), (1 + I12)**2 / (2 * (1 + I12**2)), delta=1e-3)
            self.assertAlmostEqual(f_a.inner(f_b), 0., delta=1e-8)
        self.assertIsNone(ab_modes([1., 1.])[1])

    def test_decomposition(self):
        self.assertEqual(two_click_state_decomposition([0., 0.]), (1., 0.))
        p_a2, p_b2 = two_click_state_decomposition([0., 60.])
        self.assertAlmostEqual(p_a2, 0.5, places=10)
        self.assertAlmostEqual(p_b2, 0.5, places=10)
        for dt in (0.3, 3.):
            self.assertAlmostEqual(sum(two_click_state_decomposition([0., dt])), 1., places=14)
        self.assertRaises(InvalidParameterError, two_click_state_decomposition, [0., 1., 2.])

    def test_quartic_law(self):
        for gamma_dt in (0.01, 0.02, 0.05):
            p_b2 = two_click_state_decomposition([0., gamma_dt])[1]
            self.assertAlmostEqual(p_b2 / (gamma_dt / 4.)**4, 1., delta=0.05)

    def test_norm_is_inverse_permanent(self):
        state = NPhotonState([0., 1., 3.])
        self.assertAlmostEqual(state.norm_squared() * permanent(state.gram), 1., places=14)


class TestSolver(unittest.TestCase):
    def setUp(self):
        self.separations = np.linspace(0.5, 12, 20)

    def test_two_clicks(self):
        for dt in self.separations:
            solution = solve_coefficients([0., dt])
            c, xi = closed_form_two(overlap(0., dt, 1.))
            assert_allclose(solution.coeffs, [c, c], rtol=0, atol=1e-8)
            self.assertAlmostEqual(solution.xi, xi, delta=1e-8)

    def test_three_equally_spaced_clicks(self):
        for separation in self.separations:
            clicks = ClickTimes.from_pattern('equal', 3, separation)
            solution = solve_coefficients(clicks)
            assert_allclose(solution.coeffs, closed_form_solution(clicks), rtol=0, atol=1e-8)

    def test_three_clicks_with_a_coincident_pair(self):
        for separation in self.separations:
            clicks = ClickTimes.from_pattern('coincident-pair', 3, separation)
            solution = solve_coefficients(clicks)
            assert_allclose(solution.coeffs, closed_form_solution(clicks), rtol=0, atol=1e-8)

    def test_residuals(self):
        for times in ([0., 1.5, 2.], [0., 1., 3., 3.5], [0., 0., 2.]):
            solution = solve_coefficients(times)
            self.assertLess(solution.stationarity_residual(), 1e-10)
            self.assertLess(solution.normalization_residual(), 1e-12)
            self.assertGreater(np.sum(solution.coeffs), 0)

    def test_coincident_clicks(self):
        solution = solve_coefficients([2., 2., 2.])
        assert_allclose(solution.coeffs, 1. / 3)
        self.assertEqual(solution.xi, 3.)
        self.assertAlmostEqual(solution.fidelity, 1., places=14)

    def test_optimality_against_random_modes(self):
        clicks = ClickTimes([0., 1., 2.5])
        solution = solve_coefficients(clicks)
        state = NPhotonState(clicks)
        rng = np.random.RandomState(11)
        for _ in range(100):
            c = rng.normal(size=3)
            c /= np.sqrt(c.dot(state.gram).dot(c))
            self.assertLessEqual(state.fidelity_from_coefficients(c), solution.fidelity + 1e-12)

    def test_sampled_mode_agrees_with_coefficients(self):
        clicks = ClickTimes([0., 1., 2.5])
        solution = solve_coefficients(clicks)
        self.assertAlmostEqual(fidelity_n(clicks, solution.mode()), solution.fidelity, delta=1e-3)

    def test_time_reversal(self):
        clicks = ClickTimes([0., 1., 2.5])
        forward = solve_coefficients(clicks)
        backward = solve_coefficients(clicks.reversed())
        self.assertAlmostEqual(forward.fidelity, backward.fidelity, places=10)
        assert_allclose(backward.coeffs, forward.coeffs[::-1], atol=1e-8)
        coincident = ClickTimes([0., 0., 3.])
        self.assertAlmostEqual(solve_coefficients(coincident).fidelity,
                               solve_coefficients(coincident.reversed()).fidelity, places=10)

    def test_too_few_clicks(self):
        self.assertRaises(InvalidParameterError, solve_coefficients, [1.])


class TestCurves(unittest.TestCase):
    def test_three_photon_limits(self):
        frame = three_photon_fidelity_curve('equal', [0., 60.])
        self.assertAlmostEqual(frame['fidelity'][0], 1., delta=1e-6)
        self.assertAlmostEqual(frame['fidelity'][1], 2. / 9, delta=1e-3)
        frame = three_photon_fidelity_curve('coincident-pair', [0., 60.])
        self.assertAlmostEqual(frame['fidelity'][0], 1., delta=1e-6)
        self.assertAlmostEqual(frame['fidelity'][1], 4. / 9, delta=1e-3)

    def test_three_photon_approach_to_the_limits(self):
        # equally spaced clicks 15/gamma apart still overlap by about 5e-3
        frame = three_photon_fidelity_curve('equal', [30., 60.])
        self.assertGreater(frame['fidelity'][0] - 2. / 9, 1e-3)
        self.assertLess(frame['fidelity'][0] - 2. / 9, 1e-2)
        self.assertGreater(frame['fidelity'][0], frame['fidelity'][1])
        frame = three_photon_fidelity_curve('coincident-pair', [30.])
        self.assertAlmostEqual(frame['fidelity'][0], 4. / 9, delta=1e-3)

    def test_closed_form_column(self):
        frame = three_photon_fidelity_curve('equal', np.linspace(0.5, 12, 5))
        assert_allclose(frame['fidelity'], frame['fidelity_closed_form'], atol=1e-10)
        self.assertEqual(list(frame.columns), ['separation', 'fidelity', 'fidelity_closed_form', 'xi', 'c1', 'c2', 'c3'])

    def test_four_photons(self):
        frame = n_photon_fidelity_curve(4, 'equal', [0., 80.])
        self.assertAlmostEqual(frame['fidelity'][0], 1., places=10)
        self.assertAlmostEqual(frame['fidelity'][1], math.factorial(4) / 4.**4, delta=1e-3)

    def test_decomposition_curve(self):
        frame = two_click_decomposition_curve([0., 0.4])
        self.assertEqual(list(frame.columns), ['separation', 'p_a2', 'p_b2'])
        self.assertAlmostEqual(frame['p_a2'][0], 1.)
        I12 = overlap(0., 0.4, 1.)
        self.assertAlmostEqual(frame['p_b2'][1], (1 - I12)**2 / (2 * (1 + I12**2)), places=14)
