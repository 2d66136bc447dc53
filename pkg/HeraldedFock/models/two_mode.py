# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

"""
Single-pulse two-mode squeezed vacuum conditioned on two trigger photons. The
exact fidelity with |2> is 1/cosh^6 r; the phase-space route through the
conditional Wigner machinery has to reproduce it.
"""

import logging

import numpy as np

from ..core.errors import DegenerateConditioningError, InvalidParameterError
from ..core.params import SqueezingParam
from .covariance import CovMatrix6
from .wigner import wigner_coefficients, fidelity_by_overlap

logger = logging.getLogger(__name__)

DEFAULT_N_MAX = 50


def _squeezing(r):
    value = float(r) if isinstance(r, SqueezingParam) else SqueezingParam(r).r
    if value == 0:
        raise DegenerateConditioningError('r = 0: the trigger mode is in vacuum and never clicks')
    return value


class NumberDistribution(object):
    """
    Photon number distribution p(0..n_max) of the conditional signal state.

    :param probabilities: p(n) for n = 0..n_max.
    :param tail: exact probability of n > n_max.
    :param tail_bound: geometric upper bound on the tail.
    """

    def __init__(self, probabilities, tail, tail_bound):
        self.probabilities = np.asarray(probabilities, dtype=float)
        self.tail = float(tail)
        self.tail_bound = float(tail_bound)

    @property
    def n_max(self):
        return self.probabilities.size - 1

    def __getitem__(self, n):
        return float(self.probabilities[n])

    def __len__(self):
        return self.probabilities.size

    def mean(self):
        return float(np.dot(np.arange(self.probabilities.size), self.probabilities))


def conditional_number_distribution(r, n_max=DEFAULT_N_MAX):
    """
    p(n) = n (n - 1) x^(n-2) (1 - x)^3 / 2 with x = tanh^2 r, the signal number
    distribution after two photons were taken from the trigger mode.

    :param r: squeezing parameter (float or SqueezingParam), r > 0.
    :param n_max: largest photon number tabulated, at least 2 (default, 50).
    """
    r = _squeezing(r)
    n_max = int(n_max)
    if n_max < 2:
        raise InvalidParameterError('n_max must be at least 2')
    x = np.tanh(r)**2
    n = np.arange(n_max + 1)
    with np.errstate(under='ignore'):
        p = n * (n - 1) / 2. * x**np.maximum(n - 2, 0) * (1 - x)**3
    tail = max(0., 1. - float(np.sum(p)))

    # p(n + 1)/p(n) = (n + 1) x/(n - 1) decreases with n
    ratio = (n_max + 2.) * x / n_max
    first_outside = (n_max + 1) * n_max / 2. * x**(n_max - 1) * (1 - x)**3
    tail_bound = first_outside / (1 - ratio) if ratio < 1 else np.inf
    logger.debug('r = %g: tail beyond n = %d is %.3g (bound %.3g)', r, n_max, tail, tail_bound)
    return NumberDistribution(p, tail, tail_bound)


def two_mode_covariance(r):
    """
    4x4 covariance matrix of the two-mode squeezed vacuum over (x_t, p_t, x_s, p_s).
    """
    r = float(r)
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    return np.array([[c, 0., s, 0.],
                     [0., c, 0., -s],
                     [s, 0., c, 0.],
                     [0., -s, 0., c]])


def split_trigger_covariance(r):
    """
    Covariance matrix after the trigger mode is split on a balanced beam splitter
    (vacuum in the other port), ordered as two trigger halves and the signal.

    Conditioning on one photon in each half is conditioning on two photons in the
    trigger mode, so this matrix feeds the two-click Wigner formulas directly.
    """
    r = float(r)
    # input modes (t, s, vac), output modes (t + vac, t - vac, s)
    V_in = np.eye(6)
    V_in[:4, :4] = two_mode_covariance(r)
    k = 1. / np.sqrt(2.)
    mode_map = np.array([[k, 0., k],
                         [k, 0., -k],
                         [0., 1., 0.]])
    S = np.kron(mode_map, np.eye(2))
    excess = V_in - np.eye(6)
    # cosh 2r - 1 = 2 sinh^2 r without the cancellation
    excess[range(4), range(4)] = 2 * np.sinh(r)**2
    return CovMatrix6(S.dot(V_in).dot(S.T), S.dot(excess).dot(S.T))


def two_mode_click_wigner(r):
    """
    Conditional Wigner coefficients of the signal after two trigger photons.
    """
    return wigner_coefficients(split_trigger_covariance(_squeezing(r)))


def two_mode_fidelity(r):
    """
    Exact two-photon fidelity 1/cosh^6 r.
    """
    return 1. / np.cosh(float(r))**6


def two_mode_fidelity_via_wigner(r):
    """
    Two-photon fidelity from the phase-space overlap of the conditional Wigner
    function with the Fock-state Wigner function W_2.
    """
    return fidelity_by_overlap(two_mode_click_wigner(r), n=2)
