import numpy as np
import unittest
from numpy.testing import assert_allclose

from HeraldedFock.core.errors import InvalidConfigError
from HeraldedFock.optimization.optimizer import OptNelderMead, OptLbfgs, choose_optimizer


def quadratic(x):
    x = np.asarray(x, dtype=float).ravel()
    return float(np.sum((x - np.array([1., -2.]))**2))


def quadratic_gradient(x):
    x = np.asarray(x, dtype=float).ravel()
    return 2 * (x - np.array([1., -2.]))


class TestOptimizer(unittest.TestCase):
    def test_choose_optimizer(self):
        self.assertIsInstance(choose_optimizer('nelder-mead'), OptNelderMead)
        self.assertIsInstance(choose_optimizer('simplex'), OptNelderMead)
        self.assertIsInstance(choose_optimizer('lbfgs', maxiter=10), OptLbfgs)
        self.assertRaises(InvalidConfigError, choose_optimizer, 'cobyla')

    def test_nelder_mead(self):
        optimizer = OptNelderMead(stall_tol=1e-14)
        x, fx = optimizer.optimize(np.zeros(2), f=quadratic)
        self.assertEqual(x.shape, (1, 2))
        assert_allclose(x.ravel(), [1., -2.], atol=1e-4)
        self.assertLess(fx[0, 0], 1e-8)
        self.assertTrue(optimizer.converged)

    def test_lbfgs_with_gradient(self):
        optimizer = OptLbfgs()
        x, fx = optimizer.optimize(np.zeros(2), f=quadratic, df=quadratic_gradient)
        assert_allclose(x.ravel(), [1., -2.], atol=1e-6)

    def test_history_is_nonincreasing(self):
        optimizer = OptNelderMead()
        optimizer.optimize(np.array([5., 5.]), f=quadratic)
        self.assertGreater(len(optimizer.history), 0)
        self.assertTrue(np.all(np.diff(optimizer.history) <= 0.))

    def test_stall_stops_the_run(self):
        optimizer = OptNelderMead(maxiter=5000, stall_tol=1e3, stall_window=5)
        optimizer.optimize(np.array([5., 5.]), f=quadratic)
        self.assertEqual(len(optimizer.history), 6)
        self.assertTrue(optimizer.converged)

    def test_falls_back_to_the_start(self):
        optimizer = OptNelderMead(maxiter=50)
        x0 = np.array([1., -2.])
        x, fx = optimizer.optimize(x0, f=lambda x: np.nan if np.any(np.asarray(x) != x0) else 0.)
        assert_allclose(x.ravel(), x0)
        self.assertEqual(fx[0, 0], 0.)
