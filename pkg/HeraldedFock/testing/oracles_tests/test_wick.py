import numpy as np
import unittest
from numpy.testing import assert_allclose
from scipy.stats import ortho_group

from HeraldedFock.core.errors import InvalidParameterError, NormalizationError, NotNormallyOrderedError, \
    PairingLimitError
from HeraldedFock.core.params import ClickTimes, OpoParams
from HeraldedFock.models.correlation import auto_correlation, bunching_ratio
from HeraldedFock.models.fock import fidelity_n, solve_coefficients
from HeraldedFock.oracles.wick import Symbol, OperatorString, iter_pairings, pairing_count, gaussian_moment, \
    conditional_moment_lhs, conditional_moment_rhs, detector_splitting_check, bunching_check, \
    fidelity_by_permutation_sum, numerator_order, TRIGGER, SIGNAL


def trigger_pair(t1, t2):
    return OperatorString([Symbol(TRIGGER, True, t1), Symbol(TRIGGER, False, t2)])


class TestPairings(unittest.TestCase):
    def test_counts(self):
        for size in (0, 2, 4, 6, 8):
            self.assertEqual(len(list(iter_pairings(range(size)))), pairing_count(size))
        self.assertEqual(pairing_count(6), 15)
        self.assertEqual(pairing_count(5), 0)
        self.assertEqual(pairing_count(0), 1)
        self.assertEqual(pairing_count(12), 10395)

    def test_pairings_are_perfect(self):
        for pairing in iter_pairings(range(6)):
            self.assertEqual(sorted(i for pair in pairing for i in pair), list(range(6)))


class TestGaussianMoment(unittest.TestCase):
    def setUp(self):
        self.params = OpoParams.from_ratio(0.1)

    def test_single_pair(self):
        self.assertAlmostEqual(gaussian_moment(trigger_pair(0., 0.7), self.params),
                               auto_correlation(self.params, 0.7), places=14)

    def test_equal_time_pair_of_pairs(self):
        ops = OperatorString([Symbol(TRIGGER, True, 0.), Symbol(TRIGGER, True, 0.),
                              Symbol(TRIGGER, False, 0.), Symbol(TRIGGER, False, 0.)])
        self.assertAlmostEqual(gaussian_moment(ops, self.params), 2 * auto_correlation(self.params, 0.)**2, places=14)

    def test_odd_count_vanishes(self):
        ops = OperatorString([Symbol(TRIGGER, True, 0.), Symbol(SIGNAL, True, 0.), Symbol(TRIGGER, False, 0.)])
        self.assertEqual(gaussian_moment(ops, self.params), 0.)

    def test_linear_in_every_weight(self):
        ops = OperatorString([Symbol(TRIGGER, True, 0.), Symbol(SIGNAL, True, 0.5, weight=3.)])
        base = gaussian_moment(OperatorString([Symbol(TRIGGER, True, 0.), Symbol(SIGNAL, True, 0.5)]), self.params)
        self.assertNotEqual(base, 0.)
        self.assertAlmostEqual(gaussian_moment(ops, self.params), 3 * base, places=14)

    def test_not_normally_ordered(self):
        ops = OperatorString([Symbol(TRIGGER, False, 0.), Symbol(TRIGGER, True, 0.)])
        self.assertRaises(NotNormallyOrderedError, gaussian_moment, ops, self.params)

    def test_pairing_limit(self):
        ops = OperatorString([Symbol(TRIGGER, True, 0.)] * 7 + [Symbol(TRIGGER, False, 0.)] * 7)
        self.assertRaises(PairingLimitError, gaussian_moment, ops, self.params)

    def test_unknown_beam(self):
        self.assertRaises(ValueError, Symbol, 'x', True, 0.)

    def test_bunching(self):
        closed, wick = bunching_check(self.params, 0.7)
        self.assertAlmostEqual(closed, wick, places=12)
        self.assertAlmostEqual(bunching_check(self.params, 0.)[1], 2., places=12)
        self.assertAlmostEqual(bunching_ratio(self.params, 0.7), closed)


class TestConditionalMoments(unittest.TestCase):
    def test_low_intensity_moments_match_the_fock_state(self):
        rng = np.random.RandomState(3)
        for _ in range(50):
            n = rng.randint(1, 4)
            m = rng.randint(0, n + 1)
            clicks = np.sort(rng.uniform(0., 3., n))
            primed = rng.uniform(-1., 4., m)
            double_primed = rng.uniform(-1., 4., m)
            lhs = conditional_moment_lhs(clicks, primed, double_primed)
            rhs = conditional_moment_rhs(clicks, primed, double_primed)
            assert_allclose(lhs, rhs, rtol=1e-8, atol=1e-14)

    def test_trivial_moments(self):
        self.assertEqual(conditional_moment_lhs([0., 1.], [0.5], []), 0.)
        self.assertEqual(conditional_moment_rhs([0., 1.], [0.5], []), 0.)
        self.assertEqual(conditional_moment_lhs([0.], [0., 1.], [0., 1.]), 0.)
        self.assertAlmostEqual(conditional_moment_lhs([0., 1.], [], []), 1., places=14)
        self.assertAlmostEqual(conditional_moment_rhs([0., 1.], [], []), 1., places=14)

    def test_leading_order_of_the_numerator(self):
        self.assertEqual(numerator_order([0., 1.], [0.5], [0.2]), 4)
        self.assertEqual(numerator_order([0., 1., 1.5], [], []), 6)
        self.assertIsNone(numerator_order([0., 1.], [0.5], []))

    def test_measured_slope_of_the_numerator(self):
        for args in (([0., 1.], [0.5], [0.2]), ([0., 1., 1.5], [], []), ([0., 0.4, 1.5], [0.3, 1.], [0.1, 0.9])):
            ops = OperatorString.conditional(*args)
            small = gaussian_moment(ops, OpoParams.from_ratio(1e-3))
            large = gaussian_moment(ops, OpoParams.from_ratio(2e-3))
            slope = np.log(abs(large / small)) / np.log(2.)
            self.assertAlmostEqual(slope, numerator_order(*args), delta=0.01 * numerator_order(*args))

    def test_richardson_agrees_with_the_leading_order(self):
        args = ([0., 1.], [0.2], [0.8])
        order = conditional_moment_lhs(*args)
        richardson = conditional_moment_lhs(*args, params=OpoParams(0.), method='richardson')
        assert_allclose(richardson, order, rtol=1e-5)

    def test_unknown_method(self):
        self.assertRaises(InvalidParameterError, conditional_moment_lhs, [0.], [0.], [0.], None, 'exact')

    def test_fidelity_by_permutation_sum(self):
        clicks = ClickTimes([0., 1., 2.5])
        mode = solve_coefficients(clicks).mode()
        self.assertAlmostEqual(fidelity_by_permutation_sum(clicks, mode), fidelity_n(clicks, mode), places=12)


class TestDetectorSplitting(unittest.TestCase):
    def setUp(self):
        self.params = OpoParams.from_ratio(0.05)
        self.clicks = [0., 1.2]

    def test_beam_splitter(self):
        k = 1. / np.sqrt(2.)
        report = detector_splitting_check(self.clicks, [[k, k], [k, -k]], self.params)
        self.assertLess(report.max_deviation, 1e-10)
        self.assertEqual(len(report.to_rows()), len(report.labels))

    def test_single_detector(self):
        report = detector_splitting_check(self.clicks, [[1.]], self.params, detectors=[0, 0])
        self.assertLess(report.max_deviation, 1e-12)

    def test_random_network(self):
        coeffs = ortho_group.rvs(3, random_state=5)
        report = detector_splitting_check(self.clicks, coeffs, self.params, detectors=[0, 2])
        self.assertLess(report.max_deviation, 1e-10)

    def test_invalid_networks(self):
        self.assertRaises(NormalizationError, detector_splitting_check, self.clicks, [[1., 1.], [1., -1.]], self.params)
        self.assertRaises(InvalidParameterError, detector_splitting_check, self.clicks, [[1.]], self.params)
