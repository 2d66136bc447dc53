# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

"""
Conditional single-mode Wigner function of the signal mode after two trigger
clicks, the two-photon fidelity in closed form, Fock-state Wigner functions
and the phase-space overlap route to the fidelity.

Every Wigner function handled here depends on (x, p) only through
u = x^2 + p^2, so plane integrals reduce to pi * int_0^inf f(u) du.
"""

import logging

import numpy as np
from scipy import integrate
from scipy.special import eval_laguerre

from ..core.errors import DegenerateConditioningError

logger = logging.getLogger(__name__)

# below this D1 the raw numerator and denominator underflow
UNDERFLOW_LIMIT = 1e-300


class WignerCoefficients(object):
    """
    W(x, p) = [c2 + c3 u + c4 u^2] exp(-c5 u) / c1 with u = x^2 + p^2.

    :param c1: normalization (N_click absorbed).
    :param c2: constant term.
    :param c3: u term.
    :param c4: u^2 term.
    :param c5: Gaussian decay, 1/V55.
    :param d1: intermediate D1.
    :param d2: intermediate D2.
    """

    def __init__(self, c1, c2, c3, c4, c5, d1=None, d2=None):
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.c3 = float(c3)
        self.c4 = float(c4)
        self.c5 = float(c5)
        self.d1 = d1
        self.d2 = d2

    def normalized(self):
        """
        Coefficients (c2, c3, c4)/c1 and c5: the invariant content of the state.
        """
        return np.array([self.c2 / self.c1, self.c3 / self.c1, self.c4 / self.c1, self.c5])

    def radial(self, u):
        u = np.asarray(u, dtype=float)
        return (self.c2 + self.c3 * u + self.c4 * u**2) * np.exp(-self.c5 * u) / self.c1

    def total_weight(self):
        """
        Closed-form plane integral pi (c2 v + c3 v^2 + 2 c4 v^3)/c1 with v = 1/c5.
        """
        v = 1. / self.c5
        return np.pi * (self.c2 * v + self.c3 * v**2 + 2 * self.c4 * v**3) / self.c1

    def __repr__(self):
        return 'WignerCoefficients(c1={:.6g}, c2={:.6g}, c3={:.6g}, c4={:.6g}, c5={:.6g})'.format(
            self.c1, self.c2, self.c3, self.c4, self.c5)


def _entries(V):
    """
    (V11 - 1, V13, V15, V33 - 1, V35, V55 - 1) taken from the excess over the vacuum.
    """
    return V.E11, V.V13, V.V15, V.E33, V.V35, V.E55


def _d_terms(E11, V13, V15, E33, V35, E55):
    v = 1 + E55
    d1 = v**4 * (E11 * E33 + V13**2)
    d2 = v * (2 * V15 * V35 * (V13 * v - V15 * V35)
              + v * (V15**2 * E33 + V35**2 * E11))
    return d1, d2


def wigner_coefficients(V):
    """
    Coefficients of the signal Wigner function conditioned on clicks in both trigger modes.

    :param V: CovMatrix6.
    """
    entries = _entries(V)
    V15, V35, V55 = entries[2], entries[4], 1 + entries[5]
    d1, d2 = _d_terms(*entries)
    if not np.isfinite(d1) or d1 == 0:
        raise DegenerateConditioningError('D1 = {!r}: no trigger clicks can occur for this covariance matrix'.format(d1))
    q = V15**2 * V35**2
    return WignerCoefficients(c1=d1 * V55 * np.pi,
                              c2=d1 - V55 * d2,
                              c3=d2 - 2 * V55 * q,
                              c4=q,
                              c5=1. / V55,
                              d1=d1, d2=d2)


def evaluate_wigner(coeffs, x, p):
    """
    Pointwise value of the conditional Wigner function (scalars or arrays).
    """
    value = coeffs.radial(np.asarray(x, dtype=float)**2 + np.asarray(p, dtype=float)**2)
    return float(value) if np.ndim(value) == 0 else value


def _zero_intensity(E11, V13, V15, E33, V35):
    denominator = 2 * (E11 * E33 + V13**2)
    if not abs(denominator) > 0:
        raise DegenerateConditioningError('vanishing trigger intensity: the conditional state is undefined')
    return (V15 * V35)**2 / denominator


def fidelity_zero_intensity(V):
    """
    Low intensity limit of the two-photon fidelity,
    V15^2 V35^2 / (2 [(V11 - 1)(V33 - 1) + V13^2]).
    """
    E11, V13, V15, E33, V35, E55 = _entries(V)
    if not E11 * E33 + V13**2 > 0:
        raise DegenerateConditioningError('vanishing trigger intensity: the conditional state is undefined')
    return _zero_intensity(E11, V13, V15, E33, V35)


def fidelity_two_photon(V):
    """
    Closed-form fidelity of the conditional signal state with the two-photon Fock state.

    :param V: CovMatrix6.

    .. Note:: when D1 underflows the zero intensity limit is returned instead.
    """
    return fidelity_two_photon_excess(*_entries(V))


def fidelity_two_photon_excess(E11, V13, V15, E33, V35, E55):
    """
    Closed-form two-photon fidelity from the independent x-block entries, with the
    diagonal passed as excess over the vacuum (E11 = V11 - 1, E33 = V33 - 1,
    E55 = V55 - 1); arithmetic only, so complex-step differentiation goes through it.
    """
    d1, d2 = _d_terms(E11, V13, V15, E33, V35, E55)
    if not np.isfinite(d1):
        raise DegenerateConditioningError('D1 is not finite')
    if abs(d1) < UNDERFLOW_LIMIT:
        logger.debug('D1 = %g underflows, using the zero intensity limit', abs(d1))
        return _zero_intensity(E11, V13, V15, E33, V35)
    q = (V15 * V35)**2
    v = 1 + E55
    bracket = (d1 * E55**2 * (2 + E55)**2
               + d2 * v**2 * E55 * (2 + E55) * (4 - E55)
               + 2 * v**3 * q * (4 * v - 5 * E55**2))
    return 2. * bracket / (d1 * (2 + E55)**5)


def fock_wigner(n, x, p):
    """
    Wigner function of the Fock state |n>, ((-1)^n/pi) exp(-u) L_n(2u) with u = x^2 + p^2.
    """
    u = np.asarray(x, dtype=float)**2 + np.asarray(p, dtype=float)**2
    value = fock_wigner_radial(n, u)
    return float(value) if np.ndim(value) == 0 else value


def fock_wigner_radial(n, u):
    if int(n) != n or n < 0:
        raise ValueError('the photon number must be a nonnegative integer, got {}'.format(n))
    return (-1)**int(n) / np.pi * np.exp(-u) * eval_laguerre(int(n), 2 * np.asarray(u, dtype=float))


def _radial_integral(f, decay):
    """
    pi * int_0^inf f(u) du for an integrand decaying like exp(-decay u).
    """
    upper = 120. / decay
    value, error = integrate.quad(f, 0., upper, epsabs=1e-13, epsrel=1e-12, limit=400)
    return np.pi * value


def wigner_norm(coeffs):
    """
    Plane integral of the conditional Wigner function by radial quadrature.
    """
    return _radial_integral(coeffs.radial, coeffs.c5)


def fidelity_by_overlap(coeffs, n=2):
    """
    Fidelity with |n> from the phase-space overlap 2 pi int int W W_n dx dp.

    :param coeffs: WignerCoefficients of the conditional state (or any object with a radial(u) method and c5).
    :param n: photon number of the target Fock state (default, 2).
    """
    value = _radial_integral(lambda u: coeffs.radial(u) * fock_wigner_radial(n, u), coeffs.c5 + 1.)
    return 2 * np.pi * value
