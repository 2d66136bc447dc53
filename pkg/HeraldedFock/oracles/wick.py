# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

"""
Brute-force Gaussian moments of the OPO twin beams by Wick pairing enumeration.

The conditional signal moments after n trigger clicks,

    <a+^dag(t_c) ... a-^dag(t') ... a-(t'') ... a+(t_c)> / <a+^dag(t_c) ... a+(t_c)>,

are computed here directly from the two-time correlation functions, and
independently from the n-photon state built on the modes g_i. The two routes
have to agree as eps/gamma -> 0; the detector splitting check confirms that
the conditional moments do not depend on how the trigger beam is divided among
detectors.
"""

import itertools
import logging
import math

import numpy as np
from scipy.special import factorial2

from ..core.errors import InvalidParameterError, NormalizationError, NotNormallyOrderedError, PairingLimitError, PermanentSizeError
from ..core.params import ClickTimes, OpoParams
from ..models.correlation import auto_correlation, cross_correlation, g_values, gram_matrix, bunching_ratio

logger = logging.getLogger(__name__)

TRIGGER = '+'
SIGNAL = '-'
MAX_OPERATORS = 12
MAX_RHS_CLICKS = 6
RICHARDSON_RATIOS = (1e-3, 1e-4)


class Symbol(object):
    """
    A field operator a_beam(t) or its adjoint, times a scalar weight.

    :param beam: '+' (trigger), '-' (signal) or a vacuum port name starting with 'vac'.
    :param dagger: True for a creation operator.
    :param time: instant t.
    :param weight: scalar multiplying the operator (default, 1).
    """

    def __init__(self, beam, dagger, time, weight=1.0):
        if beam not in (TRIGGER, SIGNAL) and not str(beam).startswith('vac'):
            raise ValueError('unknown beam ' + repr(beam))
        self.beam = beam
        self.dagger = bool(dagger)
        self.time = float(time)
        self.weight = weight

    @property
    def is_vacuum(self):
        return self.beam not in (TRIGGER, SIGNAL)

    def scaled(self, weight):
        return Symbol(self.beam, self.dagger, self.time, self.weight * weight)

    def __repr__(self):
        return 'a{}{}({:g})'.format(self.beam, '^dag' if self.dagger else '', self.time)


class OperatorString(object):
    """
    Ordered product of field operators.
    """

    def __init__(self, symbols):
        self.symbols = list(symbols)

    @staticmethod
    def conditional(click_times, primed=(), double_primed=()):
        """
        prod a+^dag(t_ci) prod a-^dag(t'_j) prod a-(t''_k) prod a+(t_cq).
        """
        symbols = [Symbol(TRIGGER, True, t) for t in click_times]
        symbols += [Symbol(SIGNAL, True, t) for t in primed]
        symbols += [Symbol(SIGNAL, False, t) for t in double_primed]
        symbols += [Symbol(TRIGGER, False, t) for t in click_times]
        return OperatorString(symbols)

    def weight(self):
        w = 1.0
        for s in self.symbols:
            w = w * s.weight
        return w

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __repr__(self):
        return ' '.join(repr(s) for s in self.symbols)


def iter_pairings(items):
    """
    All perfect pairings of the items by recursive first-element matching.
    """
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        for pairing in iter_pairings(rest[:i] + rest[i + 1:]):
            yield [(first, partner)] + pairing


def pairing_count(size):
    """
    (size - 1)!! perfect pairings of an even number of items.
    """
    if size % 2:
        return 0
    return int(factorial2(size - 1, exact=True)) if size else 1


class Kernels(object):
    """
    Pair contractions of the twin beam operators, memoized on time differences.

    :param params: OpoParams.
    :param low_intensity: use the leading small eps forms with eps scaled out, in
        which case every contraction carries an eps power (1 for the cross
        correlation, 2 for the auto correlation) (default, False).
    """

    def __init__(self, params, low_intensity=False):
        self.params = params
        self.low_intensity = low_intensity
        self._cache = {}

    def _value(self, kind, tau):
        key = (kind, abs(tau))
        if key not in self._cache:
            gamma = self.params.gamma
            x = gamma * abs(tau)
            if self.low_intensity:
                if kind == 'auto':
                    value = 2. / gamma * (1 + x / 2.) * np.exp(-x / 2.)
                else:
                    value = np.exp(-x / 2.)
            elif kind == 'auto':
                value = auto_correlation(self.params, tau)
            else:
                value = cross_correlation(self.params, tau)
            self._cache[key] = value
        return self._cache[key]

    def contract(self, left, right):
        """
        <left right> and its eps order, or (0, None) for a vanishing contraction.
        """
        if left.is_vacuum or right.is_vacuum:
            if left.beam == right.beam and not left.dagger and right.dagger:
                raise NotNormallyOrderedError('{!r} stands left of {!r}'.format(left, right))
            return 0., None
        if left.beam == right.beam:
            if left.dagger and not right.dagger:
                return self._value('auto', left.time - right.time), 2
            if not left.dagger and right.dagger:
                raise NotNormallyOrderedError('{!r} stands left of {!r}'.format(left, right))
            return 0., None
        if left.dagger == right.dagger:
            return self._value('cross', left.time - right.time), 1
        return 0., None


def _check_size(ops):
    if len(ops) > MAX_OPERATORS:
        raise PairingLimitError('{} operators need {} pairings (limit {} operators)'.format(
            len(ops), pairing_count(len(ops)), MAX_OPERATORS))


def graded_moment(ops, gamma=1.0):
    """
    Moment with the small eps contractions as a polynomial in eps: {order: coefficient}.
    """
    _check_size(ops)
    if len(ops) % 2:
        return {}
    kernels = Kernels(OpoParams(0., gamma), low_intensity=True)
    terms = {}
    for pairing in iter_pairings(range(len(ops))):
        product, order = 1., 0
        for i, j in pairing:
            value, grade = kernels.contract(ops[i], ops[j])
            if grade is None:
                product = 0.
                break
            product *= value
            order += grade
        if product != 0.:
            terms[order] = terms.get(order, 0.) + product
    weight = ops.weight()
    return dict((order, weight * value) for order, value in terms.items())


def gaussian_moment(ops, params, low_intensity=False):
    """
    Sum over all perfect pairings of products of pair contractions.

    :param ops: OperatorString (at most 12 operators; an odd count gives 0).
    :param params: OpoParams.
    :param low_intensity: use the small eps forms of the contractions (default, False).
    """
    _check_size(ops)
    if len(ops) % 2:
        return 0.
    kernels = Kernels(params, low_intensity=low_intensity)
    total = 0.
    for pairing in iter_pairings(range(len(ops))):
        product = 1.
        for i, j in pairing:
            value, grade = kernels.contract(ops[i], ops[j])
            if grade is None:
                product = 0.
                break
            if low_intensity:
                value *= params.epsilon**grade
            product *= value
        total += product
    return total * ops.weight()


def numerator_order(clicks, primed, double_primed, gamma=1.0):
    """
    Lowest eps power of the unnormalized conditional moment, or None when it vanishes.
    """
    terms = graded_moment(OperatorString.conditional(list(clicks), primed, double_primed), gamma)
    return min(terms) if terms else None


def conditional_moment_exact(clicks, primed, double_primed, params):
    """
    Conditional moment at finite eps with the full correlation functions.
    """
    clicks = list(clicks)
    numerator = gaussian_moment(OperatorString.conditional(clicks, primed, double_primed), params)
    denominator = gaussian_moment(OperatorString.conditional(clicks), params)
    return numerator / denominator


def conditional_moment_lhs(clicks, primed, double_primed, params=None, method='order', tolerance=1e-3):
    """
    eps -> 0 limit of the conditional normally ordered signal moment from Wick's theorem.

    :param clicks: ClickTimes of the n trigger clicks.
    :param primed: times t'_j of the signal creation operators.
    :param double_primed: times t''_k of the signal annihilation operators.
    :param params: OpoParams; gamma sets the time unit, eps is used for the truncation warning (default, eps = 0, gamma = 1).
    :param method: 'order' keeps the lowest eps order of numerator and denominator;
        'richardson' extrapolates the exact ratio from eps/gamma = 1e-3 and 1e-4.
    :param tolerance: relative size of the next order above which a warning is logged (default, 1e-3).
    """
    clicks = list(clicks)
    params = OpoParams(0.) if params is None else params
    n, m, p = len(clicks), len(primed), len(double_primed)
    if m != p or m > n:
        return 0.

    if method == 'order':
        numerator = graded_moment(OperatorString.conditional(clicks, primed, double_primed), params.gamma)
        denominator = graded_moment(OperatorString.conditional(clicks), params.gamma)
        leading = 2 * n
        if leading not in numerator:
            return 0.
        value = numerator[leading] / denominator[leading]
        if params.epsilon > 0:
            correction = abs(numerator.get(leading + 2, 0.) / numerator[leading]
                             - denominator.get(leading + 2, 0.) / denominator[leading]) * params.epsilon**2
            if correction > tolerance:
                logger.warning('eps/gamma = %g: next order correction %.3g exceeds %.3g', params.eps_over_gamma, correction, tolerance)
        return value
    elif method == 'richardson':
        ratios = RICHARDSON_RATIOS
        values = [conditional_moment_exact(clicks, primed, double_primed, params.replace(epsilon=r * params.gamma))
                  for r in ratios]
        e1, e2 = ratios[0]**2, ratios[1]**2
        extrapolated = (e1 * values[1] - e2 * values[0]) / (e1 - e2)
        if abs(values[0] - values[1]) > tolerance * max(abs(extrapolated), 1e-300):
            logger.warning('conditional moment still varies by %.3g between eps/gamma = %g and %g',
                           abs(values[0] - values[1]), ratios[0], ratios[1])
        return extrapolated
    raise InvalidParameterError('unknown method ' + repr(method))


def _permutation_sum(primed_amplitudes, double_primed_amplitudes, gram):
    """
    (1/(n - m)!) sum over permutations P_i, P_j of
    prod_k A'[k, i_k] A''[k, j_k] prod_{k > m} I[i_k, j_k], divided by sum_P prod_k I[k, j_k].
    """
    n = gram.shape[0]
    if n > MAX_RHS_CLICKS:
        raise PermanentSizeError('{} clicks exceed the permutation sum limit of {}'.format(n, MAX_RHS_CLICKS))
    m = len(primed_amplitudes)
    permutations = list(itertools.permutations(range(n)))
    numerator = 0.
    for P_i in permutations:
        left = np.prod([primed_amplitudes[k][P_i[k]] for k in range(m)])
        for P_j in permutations:
            right = np.prod([double_primed_amplitudes[k][P_j[k]] for k in range(m)])
            overlaps = np.prod([gram[P_i[k], P_j[k]] for k in range(m, n)])
            numerator += left * right * overlaps
    denominator = sum(np.prod([gram[k, P_j[k]] for k in range(n)]) for P_j in permutations)
    return numerator / math.factorial(n - m) / denominator


def conditional_moment_rhs(clicks, primed, double_primed, gamma=1.0):
    """
    The same moment evaluated in the n-photon state built on the modes g_i, by
    contracting each signal annihilator against the creators (one delta per
    contraction).
    """
    clicks = list(clicks)
    n, m, p = len(clicks), len(primed), len(double_primed)
    if m != p or m > n:
        return 0.
    gram = gram_matrix(clicks, gamma)
    A1 = [[g_values(tc, gamma, t) for tc in clicks] for t in primed]
    A2 = [[g_values(tc, gamma, t) for tc in clicks] for t in double_primed]
    return float(_permutation_sum(A1, A2, gram))


def fidelity_by_permutation_sum(clicks, f, gamma=1.0):
    """
    n-photon fidelity <a_f^dag^n a_f^n>/n! from the permutation sum with every
    signal operator projected on the mode f.
    """
    clicks = ClickTimes(list(clicks))
    weights = f.grid.weights * f.values
    projections = [float(np.dot(weights, g_values(tc, gamma, f.grid.times))) for tc in clicks]
    gram = gram_matrix(clicks, gamma)
    A = [projections] * clicks.n
    return float(_permutation_sum(A, A, gram)) / math.factorial(clicks.n)


def bunching_ratio_wick(params, dt):
    """
    <a+^dag(0) a+^dag(dt) a+(dt) a+(0)> / <a+^dag a+>^2 by pairing enumeration.
    """
    ops = OperatorString([Symbol(TRIGGER, True, 0.), Symbol(TRIGGER, True, dt),
                          Symbol(TRIGGER, False, dt), Symbol(TRIGGER, False, 0.)])
    return gaussian_moment(ops, params) / auto_correlation(params, 0.)**2


class SplitReport(object):
    """
    Conditional moments with and without the trigger beam split among detectors.

    :param labels: description of every compared moment.
    :param unsplit: moments with the clicks in the undivided trigger beam.
    :param split: moments with the clicks assigned to the chosen detectors.
    """

    def __init__(self, labels, unsplit, split):
        self.labels = list(labels)
        self.unsplit = np.asarray(unsplit)
        self.split = np.asarray(split)

    @property
    def max_deviation(self):
        scale = np.maximum(np.abs(self.unsplit), 1e-300)
        return float(np.max(np.abs(self.split - self.unsplit) / scale))

    def to_rows(self):
        return [[label, float(np.real(u)), float(np.real(s)), float(abs(s - u) / max(abs(u), 1e-300))]
                for label, u, s in zip(self.labels, self.unsplit, self.split)]


def _split_strings(ops, split_coeffs, detectors):
    """
    Expands each trigger operator into its detector beam decomposition
    c_j0 a+ + sum_i c_ji a_vac_i, yielding every weighted operator string.
    """
    choices = []
    trigger_index = 0
    n = sum(1 for s in ops if s.beam == TRIGGER and s.dagger)
    for s in ops:
        if s.beam != TRIGGER:
            choices.append([s])
            continue
        # creators run over clicks 1..n, annihilators over the same clicks
        row = split_coeffs[detectors[trigger_index % n]]
        trigger_index += 1
        expansion = []
        for port, c in enumerate(row):
            c = np.conj(c) if s.dagger else c
            beam = TRIGGER if port == 0 else 'vac{}'.format(port)
            expansion.append(Symbol(beam, s.dagger, s.time, s.weight * c))
        choices.append(expansion)
    for combination in itertools.product(*choices):
        yield OperatorString(combination)


def _split_moment(ops, split_coeffs, detectors, params):
    return sum(gaussian_moment(string, params) for string in _split_strings(ops, split_coeffs, detectors))


def detector_splitting_check(clicks, split_coeffs, params, detectors=None, signal_times=None):
    """
    Compares conditional signal moments with the clicks in the undivided trigger
    beam against the same clicks registered by detectors behind a beam splitter network.

    :param clicks: ClickTimes.
    :param split_coeffs: matrix whose row j holds the coefficients of detector beam j on
        the trigger beam (column 0) and on the vacuum ports (columns 1..); rows must have unit norm.
    :param params: OpoParams (finite eps).
    :param detectors: detector index of every click (default, click i on detector i).
    :param signal_times: instants used for the signal moments (default, the click times and their midpoint).
    """
    clicks = list(clicks)
    split_coeffs = np.atleast_2d(np.asarray(split_coeffs))
    norms = np.sum(np.abs(split_coeffs)**2, axis=1)
    if np.any(np.abs(norms - 1) > 1e-12):
        raise NormalizationError('split coefficient rows must have unit norm, got {}'.format(norms))
    if detectors is None:
        detectors = list(range(len(clicks)))
    if len(detectors) != len(clicks) or max(detectors) >= split_coeffs.shape[0]:
        raise InvalidParameterError('every click needs a detector among the {} rows'.format(split_coeffs.shape[0]))
    if signal_times is None:
        signal_times = sorted(set(clicks + [float(np.mean(clicks))]))

    tests = [('m=1 ({:g},{:g})'.format(t1, t2), [t1], [t2]) for t1 in signal_times for t2 in signal_times]
    if len(clicks) >= 2:
        t0, t1 = signal_times[0], signal_times[-1]
        tests.append(('m=2 ({:g},{:g};{:g},{:g})'.format(t0, t1, t0, t1), [t0, t1], [t0, t1]))

    denominator = gaussian_moment(OperatorString.conditional(clicks), params)
    split_denominator = _split_moment(OperatorString.conditional(clicks), split_coeffs, detectors, params)
    labels, unsplit, split = [], [], []
    for label, primed, double_primed in tests:
        ops = OperatorString.conditional(clicks, primed, double_primed)
        labels.append(label)
        unsplit.append(gaussian_moment(ops, params) / denominator)
        split.append(_split_moment(ops, split_coeffs, detectors, params) / split_denominator)
    report = SplitReport(labels, unsplit, split)
    logger.info('detector splitting: max relative deviation %.3g over %d moments', report.max_deviation, len(labels))
    return report


def bunching_check(params, dt):
    """
    (closed form, Wick) values of the trigger bunching ratio.
    """
    return bunching_ratio(params, dt), bunching_ratio_wick(params, dt)
