import numpy as np
import unittest
import warnings
from numpy.testing import assert_allclose

from HeraldedFock.core.errors import InvalidParameterError
from HeraldedFock.core.grid import TimeGrid
from HeraldedFock.core.params import ClickTimes, OpoParams
from HeraldedFock.models.correlation import g_mode
from HeraldedFock.methods.mode_optimization import OptimizerSettings, optimal_mode_zero_intensity, optimize_mode, \
    two_photon_fidelity, fidelity_point, fidelity_curve, intensity_curve, quartic_law, zero_intensity_fidelity, \
    refine_on_grid
from HeraldedFock.models.fock import ab_modes


class TestZeroIntensityMode(unittest.TestCase):
    def test_coincident_clicks_give_g1(self):
        grid = TimeGrid.around([0.], 1., step=0.02)
        f = optimal_mode_zero_intensity(0., 0., 1., grid)
        self.assertAlmostEqual(f.distance(g_mode(0., 1., grid)), 0., places=12)

    def test_matches_f_a(self):
        f = optimal_mode_zero_intensity(0., 8., 1.)
        f_a = ab_modes([0., 8.])[0]
        self.assertAlmostEqual(f.distance(f_a), 0., places=12)
        self.assertAlmostEqual(f.norm(), 1., places=12)

    def test_low_intensity_limits(self):
        self.assertAlmostEqual(zero_intensity_fidelity(0.), 1., places=14)
        self.assertAlmostEqual(zero_intensity_fidelity(80.), 0.5, places=10)
        self.assertAlmostEqual(quartic_law(0.4), 1 - 1e-4, places=14)

    def test_quartic_law_points(self):
        separations = np.array([0.2, 0.4, 0.8])
        deviations = zero_intensity_fidelity(separations) - quartic_law(separations)
        # the next order is (gamma dt)^5/384
        assert_allclose(deviations, [7.514e-7, 2.188e-5, 5.928e-4], rtol=1e-2)
        assert_allclose(deviations, separations**5 / 384., rtol=0.35)
        self.assertLess(deviations[0], 1e-5)


class TestOptimizeMode(unittest.TestCase):
    def setUp(self):
        self.settings = OptimizerSettings(step=0.02, restarts=2)
        self.coincident = ClickTimes([0., 0.])

    def test_weak_pumping(self):
        params = OpoParams.from_ratio(1e-3)
        result = optimize_mode(params, self.coincident, self.settings)
        self.assertGreaterEqual(result.fidelity, 0.999)
        zero_mode = optimal_mode_zero_intensity(0., 0., 1., result.mode.grid)
        self.assertLess(result.mode.distance(zero_mode), 1e-2)
        self.assertGreaterEqual(result.fidelity, result.zero_intensity_fidelity - 1e-9)
        self.assertLess(result.fidelity - result.zero_intensity_fidelity, 1e-4)

    def test_weak_pumping_with_separated_clicks(self):
        result = optimize_mode(OpoParams.from_ratio(1e-3), [0., 2.], self.settings)
        self.assertGreaterEqual(result.fidelity, result.zero_intensity_fidelity - 1e-9)
        self.assertLess(result.fidelity - result.zero_intensity_fidelity, 1e-4)

    def test_vanishing_gain(self):
        expected = zero_intensity_fidelity(1.)
        grid = TimeGrid.around([0., 1.], 1., step=0.02, window=20.)
        zero_mode = optimal_mode_zero_intensity(0., 1., 1., grid)
        fidelities = [two_photon_fidelity(OpoParams.from_ratio(r), [0., 1.], zero_mode) for r in (1e-6, 1e-7, 1e-8)]
        assert_allclose(fidelities, fidelities[0], rtol=1e-9)
        self.assertAlmostEqual(fidelities[0], expected, delta=2e-4)
        for r in (1e-7, 1e-8):
            result = optimize_mode(OpoParams.from_ratio(r), [0., 1.], self.settings)
            self.assertLessEqual(result.fidelity, 1.)
            self.assertAlmostEqual(result.fidelity, expected, delta=2e-4)

    def test_continuity_in_the_click_separation(self):
        settings = OptimizerSettings(step=0.01, restarts=2)
        params = OpoParams.from_ratio(0.08)
        coincident = optimize_mode(params, [0., 0.], settings).fidelity
        close = optimize_mode(params, [0., 0.01], settings).fidelity
        self.assertLess(abs(close - coincident), 1e-3)

    def test_signal_loss(self):
        params = OpoParams.from_ratio(1e-3, eta_s=0.8)
        result = optimize_mode(params, self.coincident, self.settings)
        self.assertAlmostEqual(result.fidelity, 0.64, delta=2e-3)

    def test_fidelity_decreases_with_intensity(self):
        fidelities = [optimize_mode(OpoParams.from_ratio(r), self.coincident, self.settings).fidelity
                      for r in (1e-3, 0.08, 0.2)]
        self.assertGreater(fidelities[0], fidelities[1])
        self.assertGreater(fidelities[1], fidelities[2])

    def test_flanks_dip_below_the_zero_intensity_mode(self):
        clicks = ClickTimes([0., 4.])
        result = optimize_mode(OpoParams.from_ratio(0.08), clicks, self.settings)
        zero_mode = optimal_mode_zero_intensity(0., 4., 1., result.mode.grid)
        t = result.mode.times
        flanks = (t < 0.) | (t > 4.)
        self.assertLess(np.min(result.mode.values[flanks] - zero_mode.values[flanks]), 0.)
        self.assertGreater(result.mode.value_at(0.), zero_mode.value_at(0.))
        self.assertGreaterEqual(result.fidelity, result.zero_intensity_fidelity - 1e-9)

    def test_result_invariants(self):
        params = OpoParams.from_ratio(0.05)
        result = optimize_mode(params, [0., 1.5], self.settings)
        self.assertAlmostEqual(result.mode.norm(), 1., places=8)
        self.assertGreater(result.mode.value_at(0.), 0.)
        self.assertTrue(np.all(np.diff(result.history) >= 0.))
        self.assertAlmostEqual(two_photon_fidelity(params, [0., 1.5], -result.mode), result.fidelity, places=12)
        frame = result.to_frame()
        self.assertEqual(list(frame.columns), ['t', 'f'])
        self.assertEqual(len(frame), result.mode.grid.size)

    def test_no_array_to_scalar_conversion(self):
        with warnings.catch_warnings():
            warnings.filterwarnings('error', message='Conversion of an array with ndim > 0', category=DeprecationWarning)
            result = optimize_mode(OpoParams.from_ratio(0.05), [0., 1.], self.settings)
        self.assertIsInstance(result.fidelity, float)

    def test_zero_intensity_path(self):
        params = OpoParams(0., eta_s=0.9)
        result = optimize_mode(params, self.coincident, self.settings)
        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.fidelity, 0.81, delta=1e-3)

    def test_needs_two_clicks(self):
        params = OpoParams.from_ratio(0.01)
        self.assertRaises(InvalidParameterError, optimize_mode, params, [0., 1., 2.], self.settings)


class TestCurves(unittest.TestCase):
    def setUp(self):
        self.settings = OptimizerSettings(step=0.02, restarts=1)

    def test_fidelity_curve_without_optimization(self):
        frame = fidelity_curve(OpoParams(0.), [0., 0.4, 40.], use_optimal=False, settings=self.settings)
        self.assertEqual(list(frame.columns), ['gamma_dt', 'F2_zero_intensity_mode'])
        assert_allclose(frame['F2_zero_intensity_mode'], [1., zero_intensity_fidelity(0.4), 0.5], atol=1e-3)

    def test_fidelity_curve_with_optimization(self):
        calls = []

        def mapper(function, items):
            calls.append(len(items))
            return map(function, items)

        frame = fidelity_curve(OpoParams.from_ratio(0.02), [0., 2.], settings=self.settings, mapper=mapper)
        self.assertEqual(calls, [2])
        self.assertEqual(list(frame.columns), ['gamma_dt', 'F2_optimized', 'F2_zero_intensity_mode', 'converged'])
        self.assertTrue(np.all(frame['F2_optimized'] >= frame['F2_zero_intensity_mode'] - 1e-9))
        self.assertGreater(frame['F2_optimized'][0], frame['F2_optimized'][1])

    def test_intensity_curve(self):
        frame = intensity_curve([0.01, 0.1], settings=self.settings)
        self.assertEqual(list(frame.columns), ['eps_over_gamma', 'intensity', 'F2_optimized', 'F2_zero_intensity_mode',
                                               'converged'])
        self.assertLess(frame['intensity'][0], frame['intensity'][1])
        self.assertGreater(frame['F2_optimized'][0], frame['F2_optimized'][1])


class TestModerateGainCurve(unittest.TestCase):
    def setUp(self):
        self.params = OpoParams.from_ratio(0.08)
        self.separations = [0., 1., 2., 4., 6., 8., 10.]

    def test_optimized_curve(self):
        frame = fidelity_curve(self.params, self.separations, settings=OptimizerSettings(step=0.02, restarts=2))
        optimized = frame['F2_optimized'].values
        self.assertTrue(np.all(np.diff(optimized) < 0.))
        self.assertTrue(np.all(optimized < zero_intensity_fidelity(np.array(self.separations))))
        gap = optimized - frame['F2_zero_intensity_mode'].values
        self.assertTrue(np.all(gap > -1e-9))
        self.assertTrue(np.all(gap < 1e-2))

    def test_trigger_width_convergence(self):
        coarse, fine = [fidelity_point(self.params, 4., use_optimal=False, settings=OptimizerSettings(step=step))
                        for step in (0.02, 0.01)]
        self.assertLess(abs(coarse['F2_zero_intensity_mode'] - fine['F2_zero_intensity_mode']), 1e-4)


class TestOptimizerSettings(unittest.TestCase):
    def test_defaults(self):
        settings = OptimizerSettings()
        self.assertEqual(settings.basis_size, 5)
        self.assertEqual(settings.method, 'nelder-mead')
        self.assertIsNone(settings.trigger_width)

    def test_from_config(self):
        settings = OptimizerSettings.fromConfig({'restarts': 4, 'method': 'lbfgs', 'seed': None, 'unknown': 1},
                                                {'step': 0.05})
        self.assertEqual(settings.restarts, 4)
        self.assertEqual(settings.method, 'lbfgs')
        self.assertEqual(settings.seed, 0)
        self.assertEqual(settings.step, 0.05)
        self.assertEqual(settings.to_dict()['window'], 20.)

    def test_invalid_settings(self):
        self.assertRaises(InvalidParameterError, OptimizerSettings, basis_size=1)
        self.assertRaises(InvalidParameterError, OptimizerSettings, basis_size=9)
        self.assertRaises(InvalidParameterError, OptimizerSettings, tol=0.)
        self.assertRaises(InvalidParameterError, OptimizerSettings, restarts=0)


class TestGridRefinement(unittest.TestCase):
    def setUp(self):
        self.settings = OptimizerSettings(step=0.05, restarts=1)
        self.params = OpoParams.from_ratio(0.08)

    def test_ascent_from_the_zero_intensity_mode(self):
        result = refine_on_grid(self.params, [0., 2.], iterations=20, settings=self.settings)
        self.assertGreaterEqual(result.fidelity, result.zero_intensity_fidelity)
        self.assertTrue(np.all(np.diff(result.history) > 0.))
        self.assertAlmostEqual(result.mode.norm(), 1., places=10)
        self.assertGreater(result.mode.value_at(0.), 0.)

    def test_does_not_lose_the_basis_optimum(self):
        start = optimize_mode(self.params, [0., 2.], self.settings)
        refined = refine_on_grid(self.params, [0., 2.], start=start.mode, iterations=10, settings=self.settings)
        self.assertGreaterEqual(refined.fidelity, start.fidelity - 1e-12)

    def test_needs_a_pump(self):
        self.assertRaises(InvalidParameterError, refine_on_grid, OpoParams(0.), [0., 2.])
