# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging

import numpy as np
import scipy.optimize

from ..core.errors import InvalidConfigError

logger = logging.getLogger(__name__)


class _Stalled(Exception):
    pass


class Optimizer(object):
    """
    Class for a general local minimizer over unconstrained coordinates.

    :param maxiter: maximum number of iterations.
    :param stall_tol: the run stops when the best value improved by less than this...
    :param stall_window: ...over this many iterations.
    """

    def __init__(self, maxiter=2000, stall_tol=1e-9, stall_window=20):
        self.maxiter = maxiter
        self.stall_tol = stall_tol
        self.stall_window = stall_window
        self.history = []

    def optimize(self, x0, f=None, df=None, f_df=None):
        """
        :param x0: initial point for a local optimizer.
        :param f: function to optimize.
        :param df: gradient of the function to optimize.
        :param f_df: returns both the function to optimize and its gradient.
        """
        raise NotImplementedError("The optimize method is not implemented in the parent class.")

    def _tracker(self, f):
        """
        Callback recording the best value after every iteration; stops stalled runs.
        """
        self.history = []
        self.best = None

        def callback(xk, *args):
            fk = float(f(xk))
            if self.best is None or fk <= self.best[1]:
                self.best = (np.array(xk, copy=True), fk)
            self.history.append(self.best[1])
            w = self.stall_window
            if len(self.history) > w and self.history[-w - 1] - self.history[-1] < self.stall_tol:
                raise _Stalled()
        return callback

    def _result(self, x0, f, res):
        x, fx = np.asarray(res.x), float(res.fun)
        if self.best is not None and self.best[1] < fx:
            x, fx = self.best
        f0 = float(f(x0))
        if not np.isfinite(fx) or f0 < fx:
            x, fx = np.asarray(x0, dtype=float), f0
        return np.atleast_2d(x), np.atleast_2d(fx)


class OptNelderMead(Optimizer):
    '''
    Wrapper for the Nelder-Mead simplex; only requires f.
    '''
    def __init__(self, maxiter=2000, stall_tol=1e-9, stall_window=20, xatol=1e-9, fatol=1e-12):
        super(OptNelderMead, self).__init__(maxiter, stall_tol, stall_window)
        self.xatol = xatol
        self.fatol = fatol

    def optimize(self, x0, f=None, df=None, f_df=None):
        """
        :param x0: initial point for a local optimizer.
        :param f: function to optimize.
        :param df: not used.
        :param f_df: not used.
        """
        x0 = np.asarray(x0, dtype=float).ravel()
        callback = self._tracker(f)
        options = {'maxiter': self.maxiter, 'xatol': self.xatol, 'fatol': self.fatol, 'adaptive': x0.size > 4}
        try:
            res = scipy.optimize.minimize(f, x0, method='Nelder-Mead', callback=callback, options=options)
            self.converged = bool(res.success)
        except _Stalled:
            res = scipy.optimize.OptimizeResult(x=self.best[0], fun=self.best[1], success=True)
            self.converged = True
        logger.debug('simplex finished after %d iterations, f = %.12g', len(self.history), res.fun)
        return self._result(x0, f, res)


class OptLbfgs(Optimizer):
    '''
    Wrapper for l-bfgs-b to use the true or the approximate gradients.
    '''
    def __init__(self, bounds=None, maxiter=1000, stall_tol=1e-9, stall_window=20):
        super(OptLbfgs, self).__init__(maxiter, stall_tol, stall_window)
        self.bounds = bounds

    def optimize(self, x0, f=None, df=None, f_df=None):
        """
        :param x0: initial point for a local optimizer.
        :param f: function to optimize.
        :param df: gradient of the function to optimize.
        :param f_df: returns both the function to optimize and its gradient.
        """
        x0 = np.asarray(x0, dtype=float).ravel()
        if f_df is None and df is not None:
            f_df = lambda x: (float(f(x)), df(x))
        callback = self._tracker(f)
        options = {'maxiter': self.maxiter, 'ftol': 1e-15, 'gtol': 1e-12}
        try:
            if f_df is None:
                res = scipy.optimize.minimize(f, x0, method='L-BFGS-B', bounds=self.bounds, callback=callback, options=options)
            else:
                res = scipy.optimize.minimize(f_df, x0, method='L-BFGS-B', jac=True, bounds=self.bounds, callback=callback, options=options)
            self.converged = bool(res.success)
        except _Stalled:
            res = scipy.optimize.OptimizeResult(x=self.best[0], fun=self.best[1], success=True)
            self.converged = True

        # abnormal line search terminations may leave NaNs; _result falls back to x0 then
        return self._result(x0, f, res)


def choose_optimizer(optimizer_name, maxiter=2000, **kwargs):
        """
        Selects the type of local optimizer
        """
        if optimizer_name in ('nelder-mead', 'simplex'):
            optimizer = OptNelderMead(maxiter=maxiter, **kwargs)

        elif optimizer_name == 'lbfgs':
            optimizer = OptLbfgs(maxiter=maxiter, **kwargs)
        else:
            raise InvalidConfigError('Invalid optimizer selected: {}'.format(optimizer_name))

        return optimizer
