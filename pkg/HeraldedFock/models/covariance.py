# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

"""
Covariance matrix of two trigger modes and one signal mode of the OPO output,
over the quadratures y = (x1, p1, x2, p2, x3, p3) with V_ij = <y_i y_j + y_j y_i>.

Detector efficiencies enter as scalar factors on the kernel integrals: eta on
same-beam terms and sqrt(eta_t eta_s) on trigger-signal terms. The two trigger
modes are distinct modes by construction, so no commutator term couples them,
even when both clicks fall on the same grid sample.
"""

import logging

import numpy as np

from ..core.errors import GridError
from ..core.grid import SampledModeFunction
from ..util.general import kernel_lags, toeplitz_apply
from .correlation import auto_correlation, cross_correlation

logger = logging.getLogger(__name__)

SYMPLECTIC_FORM = np.kron(np.eye(3), np.array([[0., 1.], [-1., 0.]]))


class CovMatrix6(object):
    """
    6x6 symmetric covariance matrix over (x1, p1, x2, p2, x3, p3).

    Entries are addressed with the one-based indices used in the conditional
    Wigner formulas: V11 = V[x1, x1], V13 = V[x1, x2], V15 = V[x1, x3], and so on.

    :param entries: the 6x6 matrix.
    :param excess: V - I when it is known more accurately than the difference of the
        stored entries (at weak pumping the diagonal lies within rounding of one).
    """

    def __init__(self, entries, excess=None):
        entries = np.array(entries, dtype=float)
        if entries.shape != (6, 6):
            raise ValueError('covariance matrix must be 6x6, got {}'.format(entries.shape))
        excess = entries - np.eye(6) if excess is None else np.array(excess, dtype=float)
        if excess.shape != (6, 6):
            raise ValueError('excess matrix must be 6x6, got {}'.format(excess.shape))
        self.entries = entries
        self.entries.setflags(write=False)
        self.excess = excess
        self.excess.setflags(write=False)

    def element(self, i, j):
        return float(self.entries[i - 1, j - 1])

    V11 = property(lambda self: self.element(1, 1))
    V13 = property(lambda self: self.element(1, 3))
    V15 = property(lambda self: self.element(1, 5))
    V33 = property(lambda self: self.element(3, 3))
    V35 = property(lambda self: self.element(3, 5))
    V55 = property(lambda self: self.element(5, 5))

    E11 = property(lambda self: float(self.excess[0, 0]))
    E33 = property(lambda self: float(self.excess[2, 2]))
    E55 = property(lambda self: float(self.excess[4, 4]))

    def sign_flipped(self):
        """
        Covariance matrix for the signal mode -s.
        """
        flip = np.diag([1., 1., 1., 1., -1., -1.])
        return CovMatrix6(flip.dot(self.entries).dot(flip), flip.dot(self.excess).dot(flip))

    def is_symmetric(self, tol=1e-12):
        return bool(np.allclose(self.entries, self.entries.T, rtol=0., atol=tol))

    def min_physical_eigenvalue(self):
        """
        Smallest eigenvalue of the Hermitian matrix V + i Omega.
        """
        return float(np.min(np.linalg.eigvalsh(self.entries + 1j * SYMPLECTIC_FORM)))

    def is_physical(self, tol=1e-9):
        return self.is_symmetric() and self.min_physical_eigenvalue() >= -tol

    def has_block_structure(self, tol=1e-12):
        """
        No x-p mixing, identical same-beam x and p blocks, and trigger-signal
        p-p terms equal to minus the x-x terms.
        """
        V = self.entries
        x, p = [0, 2, 4], [1, 3, 5]
        if np.max(np.abs(V[np.ix_(x, p)])) > tol:
            return False
        sign = np.array([[1, 1, -1], [1, 1, -1], [-1, -1, 1]])
        return bool(np.allclose(V[np.ix_(p, p)], sign * V[np.ix_(x, x)], rtol=0., atol=tol))

    def __repr__(self):
        return 'CovMatrix6(V11={:.6g}, V13={:.6g}, V15={:.6g}, V33={:.6g}, V35={:.6g}, V55={:.6g})'.format(
            self.V11, self.V13, self.V15, self.V33, self.V35, self.V55)


def trigger_top_hat(click_time, width, grid):
    """
    Unit-norm top hat of width Delta t_c and height 1/sqrt(Delta t_c) centered at a click.

    :param click_time: click instant.
    :param width: top hat width, at least one grid step; rounded to a whole number of samples.
    :param grid: TimeGrid shared with the other modes.
    """
    if width < grid.step * (1 - 1e-9):
        raise GridError('top hat width {} is below the grid step {}'.format(width, grid.step))
    count = max(1, int(np.rint(width / grid.step)))
    first = grid.index_of(click_time) - (count - 1) // 2
    if first < 1 or first + count > grid.size - 1:
        raise GridError('top hat at t = {} does not fit inside the grid'.format(click_time))
    values = np.zeros(grid.size)
    values[first:first + count] = 1. / np.sqrt(count * grid.step)
    return SampledModeFunction(grid, values)


class CovarianceAssembler(object):
    """
    Assembles covariance matrices for fixed OPO parameters and trigger modes,
    for any number of signal modes on the same grid.

    :param params: OpoParams.
    :param t1: first trigger mode (beam +).
    :param t2: second trigger mode (beam +).
    """

    def __init__(self, params, t1, t2):
        t1.check_same_grid(t2)
        self.params = params
        self.grid = t1.grid
        self.t1 = t1
        self.t2 = t2
        grid = self.grid
        self.weights = grid.weights
        self.auto_lags = kernel_lags(lambda tau: auto_correlation(params, tau), grid.size, grid.step)
        self.cross_lags = kernel_lags(lambda tau: cross_correlation(params, tau), grid.size, grid.step)

        w = self.weights
        auto_1 = toeplitz_apply(self.auto_lags, w * t1.values)
        auto_2 = toeplitz_apply(self.auto_lags, w * t2.values)
        self.A11 = float(np.dot(w * t1.values, auto_1))
        self.A22 = float(np.dot(w * t2.values, auto_2))
        self.A12 = float(np.dot(w * t1.values, auto_2))

        # V_{x_i x_3} = <u_i, s> with the trapezoid weights folded into u_i
        scale = 2 * np.sqrt(params.eta_t * params.eta_s)
        self.u1 = scale * w * toeplitz_apply(self.cross_lags, w * t1.values)
        self.u2 = scale * w * toeplitz_apply(self.cross_lags, w * t2.values)

    def trigger_block(self):
        """
        (V11 - 1, V33 - 1, V13): independent of the signal mode.
        """
        eta_t = self.params.eta_t
        return 2 * eta_t * self.A11, 2 * eta_t * self.A22, 2 * eta_t * self.A12

    def signal_auto(self, values):
        """
        int int s(t) s(t') <a_-^dag(t) a_-(t')> dt dt' for sampled signal values (or columns).
        """
        w = self.weights
        values = np.asarray(values, dtype=float)
        applied = toeplitz_apply(self.auto_lags, (w * values.T).T)
        return np.sum((w * values.T).T * applied, axis=0)

    def signal_entries(self, values):
        """
        (V15, V35, V55 - 1) for sampled signal values.
        """
        values = np.asarray(values, dtype=float)
        V15 = float(np.dot(self.u1, values))
        V35 = float(np.dot(self.u2, values))
        E55 = 2 * self.params.eta_s * float(self.signal_auto(values))
        return V15, V35, E55

    def assemble(self, s):
        """
        Covariance matrix for the signal mode s.
        """
        self.t1.check_same_grid(s)
        E11, E33, V13 = self.trigger_block()
        V15, V35, E55 = self.signal_entries(s.values)
        return covariance_from_excess(E11, V13, V15, E33, V35, E55)


def covariance_from_excess(E11, V13, V15, E33, V35, E55):
    """
    Builds the full 6x6 matrix from its independent x-block entries, with the
    diagonal given as excess over the vacuum: E11 = V11 - 1, E33 = V33 - 1, E55 = V55 - 1.
    """
    x_block = np.array([[E11, V13, V15], [V13, E33, V35], [V15, V35, E55]], dtype=float)
    sign = np.array([[1, 1, -1], [1, 1, -1], [-1, -1, 1]])
    excess = np.zeros((6, 6))
    excess[0::2, 0::2] = x_block
    excess[1::2, 1::2] = sign * x_block
    return CovMatrix6(excess + np.eye(6), excess)


def assemble_covariance(params, t1, t2, s):
    """
    Covariance matrix V of two trigger modes t1, t2 (beam +) and a signal mode s (beam -).

    :param params: OpoParams.
    :param t1: first trigger SampledModeFunction.
    :param t2: second trigger SampledModeFunction.
    :param s: signal SampledModeFunction; all three must share one grid.
    """
    t1.check_same_grid(s)
    V = CovarianceAssembler(params, t1, t2).assemble(s)
    logger.debug('assembled %r', V)
    return V
