# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

"""
Low intensity n-photon states heralded by n trigger clicks.

In the limit eps/gamma -> 0 the signal state is |psi_n> proportional to
prod_i int g_i(t) a^dag(t) dt |0>, with g_i the exponential mode centered at the
i-th click. Its norm is a permanent of the Gram matrix I_ij = <g_i, g_j>, and the
fidelity with n photons in a real mode f is

    F_n(f) = n! prod_i <f, g_i>^2 / perm(I).
"""

import itertools
import logging
import math

import numpy as np
import pandas as pd
from scipy import optimize

from ..core.errors import InvalidParameterError, NumericalConvergenceError, PermanentSizeError
from ..core.grid import SampledModeFunction, TimeGrid
from ..core.params import ClickTimes
from .correlation import g_values, gram_matrix, overlap

logger = logging.getLogger(__name__)

MAX_PERMANENT_SIZE = 12
RESIDUAL_TOLERANCE = 1e-10


def permanent(M):
    """
    Permanent by inclusion-exclusion over column subsets visited in Gray code
    order (one column added or removed per step).

    :param M: square matrix, at most 12x12.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError('the permanent needs a square matrix, got shape {}'.format(M.shape))
    n = M.shape[0]
    if n > MAX_PERMANENT_SIZE:
        raise PermanentSizeError('refusing a {0}x{0} permanent (limit {1}x{1})'.format(n, MAX_PERMANENT_SIZE))
    if n == 0:
        return 1.

    row_sums = np.zeros(n)
    in_subset = np.zeros(n, dtype=bool)
    total = 0.
    for k in range(1, 2**n):
        column = (k & -k).bit_length() - 1
        if in_subset[column]:
            row_sums -= M[:, column]
        else:
            row_sums += M[:, column]
        in_subset[column] = not in_subset[column]
        size = int(np.count_nonzero(in_subset))
        total += (-1)**size * np.prod(row_sums)
    return float((-1)**n * total)


def permanent_naive(M):
    """
    Permanent as the sum over all permutations; for cross-checks only.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    rows = np.arange(n)
    return float(sum(np.prod(M[rows, list(sigma)]) for sigma in itertools.permutations(range(n))))


def _clicks(clicks):
    return clicks if isinstance(clicks, ClickTimes) else ClickTimes(clicks)


def _mode_from_coefficients(clicks, coeffs, gamma, grid=None):
    if grid is None:
        grid = TimeGrid.around(clicks, gamma)
    values = sum(c * g_values(t, gamma, grid.times) for c, t in zip(coeffs, clicks))
    return SampledModeFunction(grid, values, normalize=True)


class NPhotonState(object):
    """
    Conditional signal state after n clicks at the given instants, at zero intensity.

    :param clicks: ClickTimes (or a sequence of instants).
    :param gamma: leakage rate (default, 1).
    """

    def __init__(self, clicks, gamma=1.0):
        self.clicks = _clicks(clicks)
        self.gamma = float(gamma)
        self.gram = gram_matrix(self.clicks, self.gamma)

    @property
    def n(self):
        return self.clicks.n

    def norm_squared(self):
        """
        |N_psi|^2 = 1/perm(I).
        """
        return 1. / permanent(self.gram)

    def fidelity_from_projections(self, projections):
        projections = np.asarray(projections, dtype=float)
        return math.factorial(self.n) * float(np.prod(projections**2)) * self.norm_squared()

    def fidelity_from_coefficients(self, coeffs):
        """
        F_n for f = sum_i c_i g_i with c^T I c = 1, whose projections are I c.
        """
        return self.fidelity_from_projections(self.gram.dot(coeffs))

    def fidelity(self, f):
        """
        F_n for a sampled unit-norm mode function.
        """
        grid_values = f.values * f.grid.weights
        projections = [float(np.dot(grid_values, g_values(t, self.gamma, f.grid.times))) for t in self.clicks]
        return self.fidelity_from_projections(projections)


def fidelity_n(clicks, f, gamma=1.0):
    """
    n-photon fidelity of the heralded state with n photons in the mode f.

    :param clicks: ClickTimes.
    :param f: unit-norm real SampledModeFunction.
    :param gamma: leakage rate (default, 1).
    """
    return NPhotonState(clicks, gamma).fidelity(f)


def two_click_state_decomposition(clicks, gamma=1.0):
    """
    Probabilities of |2,0>_ab and |0,2>_ab for the two-click state, with a and b the
    symmetric and antisymmetric combinations of g_1 and g_2.
    """
    clicks = _clicks(clicks)
    if clicks.n != 2:
        raise InvalidParameterError('the a/b decomposition needs exactly two clicks')
    I12 = overlap(clicks[0], clicks[1], gamma)
    p_a2 = (1 + I12)**2 / (2 * (1 + I12**2))
    p_b2 = (1 - I12)**2 / (2 * (1 + I12**2))
    return p_a2, p_b2


def ab_modes(clicks, gamma=1.0, grid=None):
    """
    f_a = (g_1 + g_2)/sqrt(2(1 + I12)) and f_b = (g_1 - g_2)/sqrt(2(1 - I12)).
    f_b is None for coincident clicks.
    """
    clicks = _clicks(clicks)
    if clicks.n != 2:
        raise InvalidParameterError('f_a and f_b are defined for two clicks')
    f_a = _mode_from_coefficients(clicks, [1., 1.], gamma, grid)
    if clicks.span == 0:
        return f_a, None
    f_b = _mode_from_coefficients(clicks, [1., -1.], gamma, f_a.grid)
    return f_a, f_b


class GramSolution(object):
    """
    Stationary point of the n-photon fidelity over f = sum_i c_i g_i.

    :param clicks: ClickTimes.
    :param gram: Gram matrix I_ij.
    :param coeffs: coefficients c_i with c^T I c = 1 and sum(c) > 0.
    :param xi: Lagrange multiplier.
    :param gamma: leakage rate.
    """

    def __init__(self, clicks, gram, coeffs, xi, gamma=1.0):
        self.clicks = clicks
        self.gram = np.asarray(gram, dtype=float)
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.xi = float(xi)
        self.gamma = float(gamma)
        self.fidelity = NPhotonState(clicks, gamma).fidelity_from_coefficients(self.coeffs)

    def stationarity_residual(self):
        return float(np.max(np.abs(_stationarity(self.gram, self.coeffs, self.xi))))

    def normalization_residual(self):
        return abs(float(self.coeffs.dot(self.gram).dot(self.coeffs)) - 1.)

    def mode(self, grid=None):
        return _mode_from_coefficients(self.clicks, self.coeffs, self.gamma, grid)

    def __repr__(self):
        return 'GramSolution(coeffs={}, xi={:.12g}, fidelity={:.12g})'.format(list(self.coeffs), self.xi, self.fidelity)


def _products(gram, c):
    """
    p_i = prod_{j != i} (I c)_j.
    """
    s = gram.dot(c)
    return np.array([np.prod(np.delete(s, i)) for i in range(s.size)])


def _stationarity(gram, c, xi):
    return xi * c - _products(gram, c)


def _normalize(gram, c):
    c = c / np.sqrt(c.dot(gram).dot(c))
    return c if np.sum(c) >= 0 else -c


def _multiplier(gram, c):
    return float(c.dot(_products(gram, c)) / c.dot(c))


def _fixed_point(gram, seed, damping=0.5, max_iter=500, tol=1e-12):
    c = _normalize(gram, np.asarray(seed, dtype=float))
    for it in range(max_iter):
        p = _products(gram, c)
        c_new = _normalize(gram, (1 - damping) * c + damping * _normalize(gram, p))
        if np.max(np.abs(c_new - c)) < tol:
            return c_new
        c = c_new
    return c


def _polish(gram, c):
    n = c.size

    def equations(z):
        c, xi = z[:n], z[n]
        return np.append(_stationarity(gram, c, xi), c.dot(gram).dot(c) - 1.)

    z0 = np.append(c, _multiplier(gram, c))
    for method in ('hybr', 'lm'):
        sol = optimize.root(equations, z0, method=method, options={'xtol': 1e-15} if method == 'hybr' else {'xtol': 1e-15, 'ftol': 1e-15})
        if np.all(np.isfinite(sol.x)) and np.max(np.abs(equations(sol.x))) < RESIDUAL_TOLERANCE:
            return sol.x[:n], sol.x[n]
    return None


def solve_coefficients(clicks, gamma=1.0, seeds=None, random_seeds=4, random_state=0):
    """
    Coefficients c_i and multiplier xi of the mode f = sum_i c_i g_i maximizing F_n,
    from xi c_i = prod_{j != i} sum_k c_k I_kj and sum_ij c_i c_j I_ij = 1.

    :param clicks: ClickTimes with at least two clicks.
    :param gamma: leakage rate (default, 1).
    :param seeds: extra starting vectors for the fixed point iteration.
    :param random_seeds: number of random starting vectors added to the uniform and single-mode seeds (default, 4).
    :param random_state: seed of the random starting vectors (default, 0).

    .. Note:: all clicks coincident gives a rank one Gram matrix, handled analytically
    (c_i = 1/n, xi = n, f = g_1).
    """
    clicks = _clicks(clicks)
    n = clicks.n
    if n < 2:
        raise InvalidParameterError('at least two clicks are required, got {}'.format(n))
    gram = gram_matrix(clicks, gamma)
    if clicks.span == 0:
        return GramSolution(clicks, gram, np.full(n, 1. / n), float(n), gamma)

    rng = np.random.RandomState(random_state)
    starts = [np.ones(n)] + [row for row in np.eye(n)] + [rng.uniform(0.1, 1., n) for _ in range(random_seeds)]
    if seeds is not None:
        starts.extend(np.asarray(s, dtype=float) for s in seeds)

    best = None
    diagnostics = {'seeds': len(starts), 'residuals': []}
    for seed in starts:
        polished = _polish(gram, _fixed_point(gram, seed))
        if polished is None:
            diagnostics['residuals'].append(None)
            continue
        c, xi = polished
        if np.sum(c) < 0:
            c = -c
            xi = _multiplier(gram, c)
        candidate = GramSolution(clicks, gram, c, xi, gamma)
        diagnostics['residuals'].append(candidate.stationarity_residual())
        logger.debug('stationary point %r', candidate)
        if best is None or candidate.fidelity > best.fidelity + 1e-14:
            best = candidate
    if best is None:
        raise NumericalConvergenceError('no stationary point found for clicks {}'.format(clicks), diagnostics)
    return best


def closed_form_two(I12):
    """
    c_1 = c_2 = 1/sqrt(2(1 + I12)) and xi = 1 + I12.
    """
    return 1. / np.sqrt(2 * (1 + I12)), 1 + I12


def closed_form_three_equal(I12, I13):
    """
    (c_1 = c_3, c_2) for three equally spaced clicks, I23 = I12.
    """
    a, B = float(I12), 1. + float(I13)
    root = np.sqrt(a**2 + 4 * B)
    c1 = np.sqrt(2. / (3 * (2 * B - a**2 + a * root)))
    c2 = -2 * c1 * a + np.sqrt(1 + 2 * c1**2 * (2 * a**2 - B))
    return c1, c2


def closed_form_three_coincident(I13):
    """
    (c_1 = c_2, c_3) for t_c1 = t_c2, I23 = I13.

    c_1^2 is the smaller root of 12 (1 - b^2) X^2 - (4 - b^2) X + 2/3 = 0, written
    without cancellation; c_3 follows from the normalization, which agrees with
    c_3 = (1 - 6 c_1^2)/(3 c_1 b) wherever the latter is defined.
    """
    b = float(I13)
    u = 4 - b**2
    X = 2. / (3 * (u + np.sqrt(max(u**2 - 16 * (1 - b**2), 0.))))
    c1 = np.sqrt(X)
    c3 = -2 * c1 * b + np.sqrt(4 * X * b**2 + 1 - 4 * X)
    return c1, c3


def closed_form_solution(clicks, gamma=1.0):
    """
    Closed-form coefficients for n = 2 and the two n = 3 click patterns, or None.
    """
    clicks = _clicks(clicks)
    I = gram_matrix(clicks, gamma)
    if clicks.n == 2:
        c, xi = closed_form_two(I[0, 1])
        return np.array([c, c])
    if clicks.n == 3:
        if np.isclose(I[0, 1], I[1, 2], rtol=0., atol=1e-14):
            c1, c2 = closed_form_three_equal(I[0, 1], I[0, 2])
            return np.array([c1, c2, c1])
        if I[0, 1] == 1.:
            c1, c3 = closed_form_three_coincident(I[0, 2])
            return np.array([c1, c1, c3])
    return None


def three_photon_fidelity_curve(spacing_mode, separations, gamma=1.0):
    """
    F_3 against the distance between the first and the last click.

    :param spacing_mode: 'equal' or 'coincident-pair'.
    :param separations: gamma |t_c3 - t_c1| values.
    :param gamma: leakage rate (default, 1).
    """
    rows = []
    for separation in np.atleast_1d(np.asarray(separations, dtype=float)):
        clicks = ClickTimes.from_pattern(spacing_mode, 3, separation / gamma)
        solution = solve_coefficients(clicks, gamma)
        closed = closed_form_solution(clicks, gamma)
        closed_fidelity = np.nan if closed is None else NPhotonState(clicks, gamma).fidelity_from_coefficients(closed)
        rows.append([separation, solution.fidelity, closed_fidelity, solution.xi] + list(solution.coeffs))
    return pd.DataFrame(rows, columns=['separation', 'fidelity', 'fidelity_closed_form', 'xi', 'c1', 'c2', 'c3'])


def n_photon_fidelity_curve(n, spacing_mode, separations, gamma=1.0):
    """
    F_n and the optimal coefficients for general n along a click pattern sweep.
    """
    rows = []
    for separation in np.atleast_1d(np.asarray(separations, dtype=float)):
        clicks = ClickTimes.from_pattern(spacing_mode, n, separation / gamma)
        solution = solve_coefficients(clicks, gamma)
        rows.append([separation, solution.fidelity, solution.xi] + list(solution.coeffs))
    return pd.DataFrame(rows, columns=['separation', 'fidelity', 'xi'] + ['c{}'.format(i + 1) for i in range(n)])


def two_click_decomposition_curve(separations, gamma=1.0):
    """
    p_a2 and p_b2 along a sweep of click separations; p_a2 is F_2(f_a).
    """
    rows = []
    for separation in np.atleast_1d(np.asarray(separations, dtype=float)):
        clicks = ClickTimes([0., separation / gamma])
        p_a2, p_b2 = two_click_state_decomposition(clicks, gamma)
        rows.append([separation, p_a2, p_b2])
    return pd.DataFrame(rows, columns=['separation', 'p_a2', 'p_b2'])
