# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging

import numpy as np
import pandas as pd

from ..core.errors import InvalidParameterError
from ..core.grid import TimeGrid, SampledModeFunction
from ..core.params import ClickTimes, OpoParams
from ..models.correlation import g_values, overlap, twin_beam_intensity
from ..models.covariance import CovarianceAssembler, trigger_top_hat, covariance_from_excess
from ..models.fock import NPhotonState
from ..models.wigner import fidelity_two_photon_excess
from ..optimization.optimizer import choose_optimizer
from ..util.general import toeplitz_apply

logger = logging.getLogger(__name__)

# decay rates of the cusp basis, in units of gamma; 0.5 reproduces the g_i themselves
BASIS_RATES = (0.5, 0.75, 1.0, 1.5, 2.5, 4.0, 0.35, 6.0)


class OptimizerSettings(object):
    """
    Settings of the signal mode optimization.

    :param basis_size: number of cusp decay rates per click (2..8, default 5).
    :param max_iters: iteration limit of every local run (default, 2000).
    :param tol: the fidelity counts as converged when it improved by less than tol over 20 iterations (default, 1e-9).
    :param restarts: number of local runs (default, 3).
    :param method: 'nelder-mead' or 'lbfgs' (default, 'nelder-mead').
    :param seed: seed of the perturbed starting points (default, 0).
    :param step: grid spacing in units of 1/gamma (default, 0.01).
    :param window: grid margin in units of 1/gamma (default, 20).
    :param trigger_width: top hat width of the trigger modes in units of 1/gamma (default, one grid step).
    """

    def __init__(self, basis_size=5, max_iters=2000, tol=1e-9, restarts=3, method='nelder-mead', seed=0,
                 step=0.01, window=20., trigger_width=None):
        self.basis_size = int(basis_size)
        self.max_iters = int(max_iters)
        self.tol = float(tol)
        self.restarts = int(restarts)
        self.method = method
        self.seed = int(seed)
        self.step = float(step)
        self.window = float(window)
        self.trigger_width = None if trigger_width is None else float(trigger_width)
        if not 2 <= self.basis_size <= len(BASIS_RATES):
            raise InvalidParameterError('basis_size must lie in [2, {}]'.format(len(BASIS_RATES)))
        if not self.tol > 0:
            raise InvalidParameterError('tol must be positive')
        if self.restarts < 1 or self.max_iters < 1:
            raise InvalidParameterError('restarts and max_iters must be positive')

    @staticmethod
    def fromConfig(optimizer_config, grid_config=None):
        grid_config = grid_config or {}
        kwargs = dict((k, v) for k, v in optimizer_config.items()
                      if k in ('basis_size', 'max_iters', 'tol', 'restarts', 'method', 'seed', 'trigger_width') and v is not None)
        for key in ('step', 'window'):
            if grid_config.get(key) is not None:
                kwargs[key] = grid_config[key]
        return OptimizerSettings(**kwargs)

    def to_dict(self):
        return dict(basis_size=self.basis_size, max_iters=self.max_iters, tol=self.tol, restarts=self.restarts,
                    method=self.method, seed=self.seed, step=self.step, window=self.window, trigger_width=self.trigger_width)


class ModeOptimizationResult(object):
    """
    Outcome of a signal mode optimization.

    :param mode: optimal unit-norm SampledModeFunction, gauge f(t_c1) > 0.
    :param fidelity: two-photon fidelity of the mode.
    :param converged: False when no local run met the convergence criterion.
    :param history: best fidelity after every accepted iteration of the winning run.
    :param zero_intensity_fidelity: fidelity of the zero intensity mode at the same parameters.
    """

    def __init__(self, mode, fidelity, converged, history, zero_intensity_fidelity):
        self.mode = mode
        self.fidelity = float(fidelity)
        self.converged = bool(converged)
        self.history = np.asarray(history, dtype=float)
        self.zero_intensity_fidelity = float(zero_intensity_fidelity)

    def to_frame(self):
        """
        Sampled mode function as a table (t, f).
        """
        return pd.DataFrame({'t': self.mode.times, 'f': self.mode.values})

    def __iter__(self):
        return iter((self.mode, self.fidelity))

    def __repr__(self):
        return 'ModeOptimizationResult(fidelity={:.12g}, converged={})'.format(self.fidelity, self.converged)


def _two_clicks(clicks):
    clicks = clicks if isinstance(clicks, ClickTimes) else ClickTimes(clicks)
    if clicks.n != 2:
        raise InvalidParameterError('two trigger clicks are required, got {}'.format(clicks.n))
    return clicks


def _grid(clicks, gamma, settings):
    return TimeGrid.around(clicks, gamma, step=settings.step / gamma, window=settings.window / gamma)


def optimal_mode_zero_intensity(t_c1, t_c2, gamma=1.0, grid=None):
    """
    Zero intensity optimum N [exp(-gamma|t - t_c1|/2) + exp(-gamma|t - t_c2|/2)].

    :param t_c1: first click.
    :param t_c2: second click.
    :param gamma: leakage rate (default, 1).
    :param grid: TimeGrid (default, the standard grid around the clicks).
    """
    if grid is None:
        grid = TimeGrid.around([t_c1, t_c2], gamma)
    return SampledModeFunction(grid, g_values(t_c1, gamma, grid.times) + g_values(t_c2, gamma, grid.times), normalize=True)


class TwoPhotonObjective(object):
    """
    Two-photon fidelity as a function of the signal mode for fixed OPO parameters
    and trigger clicks; the trigger modes are top hats on the shared grid.

    :param params: OpoParams with eps > 0.
    :param clicks: two ClickTimes.
    :param grid: TimeGrid.
    :param trigger_width: top hat width (default, one grid step).
    """

    def __init__(self, params, clicks, grid, trigger_width=None):
        width = grid.step if trigger_width is None else trigger_width
        self.params = params
        self.clicks = clicks
        self.grid = grid
        t1 = trigger_top_hat(clicks[0], width, grid)
        t2 = trigger_top_hat(clicks[1], width, grid)
        self.assembler = CovarianceAssembler(params, t1, t2)
        self.trigger_entries = self.assembler.trigger_block()

    def entries(self, values):
        """
        (V11 - 1, V13, V15, V33 - 1, V35, V55 - 1) for sampled signal values.
        """
        E11, E33, V13 = self.trigger_entries
        V15, V35, E55 = self.assembler.signal_entries(values)
        return E11, V13, V15, E33, V35, E55

    def fidelity(self, values):
        return fidelity_two_photon_excess(*self.entries(values))

    def covariance(self, f):
        return covariance_from_excess(*self.entries(f.values))

    def gradient(self, values):
        """
        dF/df_k by the chain rule through (V15, V35, V55); the outer derivatives
        use a complex step.
        """
        entries = self.entries(values)
        h = 1e-30
        outer = []
        for k in (2, 4, 5):
            z = [complex(v) for v in entries]
            z[k] += 1j * h
            outer.append(fidelity_two_photon_excess(*z).imag / h)
        w = self.grid.weights
        dV55 = 4 * self.params.eta_s * w * toeplitz_apply(self.assembler.auto_lags, w * values)
        return outer[0] * self.assembler.u1 + outer[1] * self.assembler.u2 + outer[2] * dV55


class CuspBasis(object):
    """
    Orthonormal basis (trapezoid inner product) spanned by exp(-kappa gamma |t - t_ci|)
    for the clicks and the chosen decay rates; duplicate functions from coincident clicks
    are removed by the rank cut.
    """

    def __init__(self, clicks, gamma, grid, basis_size):
        times = grid.times
        columns = [np.exp(-kappa * gamma * np.abs(times - tc)) for kappa in BASIS_RATES[:basis_size] for tc in clicks]
        B = np.column_stack(columns)
        sqrt_w = np.sqrt(grid.weights)
        U, s, Vt = np.linalg.svd(sqrt_w[:, None] * B, full_matrices=False)
        keep = s > 1e-10 * s[0]
        self.grid = grid
        self.Q = U[:, keep] / sqrt_w[:, None]
        self.size = int(np.count_nonzero(keep))

    def values(self, c):
        c = np.asarray(c, dtype=float)
        return self.Q.dot(c) / np.linalg.norm(c)

    def coordinates(self, values):
        return self.Q.T.dot(self.grid.weights * values)


class ProjectedObjective(object):
    """
    The two-photon fidelity in basis coordinates, with V15, V35 and V55 reduced to
    small precomputed vectors and matrices; f = Q c/|c| always has unit norm.
    """

    def __init__(self, objective, basis):
        self.objective = objective
        self.basis = basis
        assembler = objective.assembler
        self.p1 = basis.Q.T.dot(assembler.u1)
        self.p2 = basis.Q.T.dot(assembler.u2)
        w = basis.grid.weights
        applied = toeplitz_apply(assembler.auto_lags, w[:, None] * basis.Q)
        self.M = (w[:, None] * basis.Q).T.dot(applied)
        self.M = 0.5 * (self.M + self.M.T)
        self.evaluations = 0

    def fidelity(self, c):
        c = np.asarray(c, dtype=float).ravel()
        norm2 = c.dot(c)
        if not norm2 > 0:
            return 0.
        E11, E33, V13 = self.objective.trigger_entries
        norm = np.sqrt(norm2)
        V15 = self.p1.dot(c) / norm
        V35 = self.p2.dot(c) / norm
        E55 = 2 * self.objective.params.eta_s * c.dot(self.M).dot(c) / norm2
        self.evaluations += 1
        return fidelity_two_photon_excess(E11, V13, V15, E33, V35, E55)

    def loss(self, c):
        return -self.fidelity(c)


def _gauge(mode, t_c1):
    return -mode if mode.value_at(t_c1) < 0 else mode


def two_photon_fidelity(params, clicks, f, trigger_width=None):
    """
    Two-photon fidelity of the signal mode f after clicks at the two given instants.
    At eps = 0 the limit eta_s^2 F_2 of the low intensity state is returned.

    :param params: OpoParams.
    :param clicks: two click instants.
    :param f: unit-norm SampledModeFunction; its grid carries the trigger modes.
    :param trigger_width: top hat width (default, one grid step).
    """
    clicks = _two_clicks(clicks)
    if params.epsilon == 0:
        return params.eta_s**2 * NPhotonState(clicks, params.gamma).fidelity(f)
    return TwoPhotonObjective(params, clicks, f.grid, trigger_width).fidelity(f.values)


def _starting_points(basis, clicks, gamma, settings):
    grid = basis.grid
    rng = np.random.RandomState(settings.seed)
    zero_intensity = optimal_mode_zero_intensity(clicks[0], clicks[1], gamma, grid)
    starts = [basis.coordinates(zero_intensity.values),
              basis.coordinates(g_values(clicks[0], gamma, grid.times))]
    while len(starts) < settings.restarts:
        c = starts[0] / np.linalg.norm(starts[0])
        starts.append(c + 0.1 * rng.normal(size=c.size))
    return starts[:settings.restarts], zero_intensity


def optimize_mode(params, clicks, settings=None):
    """
    Real unit-norm signal mode maximizing the two-photon fidelity after two clicks.

    :param params: OpoParams.
    :param clicks: ClickTimes with two clicks.
    :param settings: OptimizerSettings (default, OptimizerSettings()).

    .. Note:: the zero intensity mode is the first starting point, so the returned
    fidelity is never below its fidelity.
    """
    settings = settings or OptimizerSettings()
    clicks = _two_clicks(clicks)
    gamma = params.gamma
    grid = _grid(clicks, gamma, settings)

    if params.epsilon == 0:
        mode = optimal_mode_zero_intensity(clicks[0], clicks[1], gamma, grid)
        fidelity = params.eta_s**2 * NPhotonState(clicks, gamma).fidelity(mode)
        return ModeOptimizationResult(mode, fidelity, True, [fidelity], fidelity)

    width = None if settings.trigger_width is None else settings.trigger_width / gamma
    objective = TwoPhotonObjective(params, clicks, grid, width)
    basis = CuspBasis(clicks, gamma, grid, settings.basis_size)
    projected = ProjectedObjective(objective, basis)
    starts, zero_intensity = _starting_points(basis, clicks, gamma, settings)
    zero_intensity_fidelity = objective.fidelity(zero_intensity.values)

    best, converged = None, False
    for i, c0 in enumerate(starts):
        optimizer = choose_optimizer(settings.method, maxiter=settings.max_iters, stall_tol=settings.tol)
        c, loss = optimizer.optimize(c0, f=projected.loss)
        fidelity = -loss.item()
        converged = converged or optimizer.converged
        logger.debug('run %d: F2 = %.12g after %d iterations', i, fidelity, len(optimizer.history))
        if best is None or fidelity > best[1]:
            best = (c.ravel(), fidelity, [-v for v in optimizer.history] or [fidelity])

    if not converged:
        logger.warning('mode optimization did not converge after %d restarts; reporting the best F2 = %.9g',
                       len(starts), best[1])
    mode = _gauge(SampledModeFunction(grid, basis.values(best[0]), normalize=True), clicks[0])
    fidelity = objective.fidelity(mode.values)
    logger.info('eps/gamma = %g, clicks %s: F2 = %.9g (zero intensity mode %.9g)',
                params.eps_over_gamma, list(clicks), fidelity, zero_intensity_fidelity)
    return ModeOptimizationResult(mode, fidelity, converged, best[2], zero_intensity_fidelity)


def refine_on_grid(params, clicks, start=None, iterations=200, settings=None):
    """
    Projected gradient ascent of the two-photon fidelity over the sampled values of
    the mode on the unit sphere, with a backtracking step.

    :param params: OpoParams with eps > 0.
    :param clicks: two clicks.
    :param start: starting SampledModeFunction (default, the zero intensity mode).
    :param iterations: maximum number of accepted steps (default, 200).
    :param settings: OptimizerSettings for the grid (default, OptimizerSettings()).
    """
    settings = settings or OptimizerSettings()
    clicks = _two_clicks(clicks)
    if params.epsilon == 0:
        raise InvalidParameterError('grid refinement needs eps > 0')
    grid = start.grid if start is not None else _grid(clicks, params.gamma, settings)
    if start is None:
        start = optimal_mode_zero_intensity(clicks[0], clicks[1], params.gamma, grid)
    width = None if settings.trigger_width is None else settings.trigger_width / params.gamma
    objective = TwoPhotonObjective(params, clicks, grid, width)
    w = grid.weights

    f = start.values.copy()
    value = objective.fidelity(f)
    history = [value]
    step = 1.
    converged = False
    for it in range(iterations):
        gradient = objective.gradient(f) / w
        tangent = gradient - np.sum(w * gradient * f) * f
        size = np.sqrt(np.sum(w * tangent**2))
        if size < 1e-14:
            converged = True
            break
        while step > 1e-12:
            trial = f + step * tangent / size
            trial /= np.sqrt(np.sum(w * trial**2))
            trial_value = objective.fidelity(trial)
            if trial_value > value:
                break
            step *= 0.5
        else:
            converged = True
            break
        gain = trial_value - value
        f, value = trial, trial_value
        history.append(value)
        step *= 2.
        if gain < settings.tol * 1e-3:
            converged = True
            break

    mode = _gauge(SampledModeFunction(grid, f, normalize=True), clicks[0])
    return ModeOptimizationResult(mode, objective.fidelity(mode.values), converged, history,
                                  objective.fidelity(optimal_mode_zero_intensity(clicks[0], clicks[1], params.gamma, grid).values))


def fidelity_point(params, gamma_dt, use_optimal=True, settings=None):
    """
    One row of the fidelity versus click separation table.
    """
    settings = settings or OptimizerSettings()
    clicks = ClickTimes([0., gamma_dt / params.gamma])
    grid = _grid(clicks, params.gamma, settings)
    zero_mode = optimal_mode_zero_intensity(clicks[0], clicks[1], params.gamma, grid)
    row = {'gamma_dt': float(gamma_dt), 'F2_zero_intensity_mode': two_photon_fidelity(params, clicks, zero_mode)}
    if use_optimal:
        result = optimize_mode(params, clicks, settings)
        row['F2_optimized'] = result.fidelity
        row['converged'] = result.converged
    return row


def fidelity_curve(params, separations, use_optimal=True, settings=None, mapper=map):
    """
    Two-photon fidelity against gamma |t_c2 - t_c1|.

    :param params: OpoParams.
    :param separations: gamma dt values.
    :param use_optimal: also optimize the mode at every point (default, True).
    :param settings: OptimizerSettings.
    :param mapper: map-like callable used to evaluate the points (default, builtin map).
    """
    separations = np.atleast_1d(np.asarray(separations, dtype=float))
    rows = list(mapper(lambda dt: fidelity_point(params, dt, use_optimal, settings), separations))
    columns = ['gamma_dt', 'F2_optimized', 'F2_zero_intensity_mode', 'converged'] if use_optimal \
        else ['gamma_dt', 'F2_zero_intensity_mode']
    return pd.DataFrame(rows, columns=columns)


def intensity_point(eps_over_gamma, gamma_dt=0., gamma=1.0, eta_t=1.0, eta_s=1.0, settings=None):
    """
    One row of the fidelity versus intensity table.
    """
    params = OpoParams.from_ratio(eps_over_gamma, gamma, eta_t, eta_s)
    row = fidelity_point(params, gamma_dt, True, settings)
    row['eps_over_gamma'] = float(eps_over_gamma)
    row['intensity'] = twin_beam_intensity(params)
    return row


def intensity_curve(eps_over_gamma_values, gamma_dt=0., gamma=1.0, eta_t=1.0, eta_s=1.0, settings=None, mapper=map):
    """
    Two-photon fidelity of the optimized and of the zero intensity mode against eps/gamma.
    """
    values = np.atleast_1d(np.asarray(eps_over_gamma_values, dtype=float))
    rows = list(mapper(lambda e: intensity_point(e, gamma_dt, gamma, eta_t, eta_s, settings), values))
    return pd.DataFrame(rows, columns=['eps_over_gamma', 'intensity', 'F2_optimized', 'F2_zero_intensity_mode', 'converged'])


def quartic_law(gamma_dt):
    """
    Small separation approximation 1 - (gamma dt/4)^4 of the zero intensity fidelity.
    """
    return 1. - (np.asarray(gamma_dt, dtype=float) / 4.)**4


def zero_intensity_fidelity(gamma_dt):
    """
    F_2 of the zero intensity mode at eps -> 0, (1 + I12)^2/(2 (1 + I12^2)).
    """
    I12 = overlap(0., gamma_dt, 1.)
    return (1 + I12)**2 / (2 * (1 + I12**2))
