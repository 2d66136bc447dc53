# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import numpy as np

from .errors import InvalidParameterError


class OpoParams(object):
    """
    Physical parameters of a nondegenerate OPO below threshold.

    :param epsilon: nonlinear gain coefficient (a rate, same units as gamma).
    :param gamma: output mirror leakage rate (default, 1).
    :param eta_t: trigger detector efficiency in [0, 1] (default, 1).
    :param eta_s: signal detector efficiency in [0, 1] (default, 1).

    .. Note:: instances are treated as immutable; use :meth:`replace` to derive
    a modified parameter set.
    """

    def __init__(self, epsilon, gamma=1.0, eta_t=1.0, eta_s=1.0):
        self.epsilon = float(epsilon)
        self.gamma = float(gamma)
        self.eta_t = float(eta_t)
        self.eta_s = float(eta_s)
        self._check()

    def _check(self):
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise InvalidParameterError('gamma must be a positive rate, got {}'.format(self.gamma))
        if not np.isfinite(self.epsilon) or self.epsilon < 0:
            raise InvalidParameterError('epsilon must be nonnegative, got {}'.format(self.epsilon))
        if self.epsilon >= self.gamma / 2.:
            raise InvalidParameterError('epsilon/gamma = {} is at or above threshold (must be < 0.5)'.format(self.eps_over_gamma))
        for name in ('eta_t', 'eta_s'):
            eta = getattr(self, name)
            if not (0. <= eta <= 1.):
                raise InvalidParameterError('{} must lie in [0, 1], got {}'.format(name, eta))

    @staticmethod
    def from_ratio(eps_over_gamma, gamma=1.0, eta_t=1.0, eta_s=1.0):
        """
        Builds the parameters from the dimensionless intensity parameter epsilon/gamma.
        """
        return OpoParams(float(eps_over_gamma) * float(gamma), gamma, eta_t, eta_s)

    @staticmethod
    def fromConfig(config):
        """
        Builds the parameters from the 'params' section of a run configuration.
        'eps_over_gamma' takes precedence over 'epsilon' when both are present.
        """
        gamma = float(config.get('gamma', 1.0))
        eta_t = float(config.get('eta_t', 1.0))
        eta_s = float(config.get('eta_s', 1.0))
        if config.get('eps_over_gamma') is not None:
            return OpoParams.from_ratio(config['eps_over_gamma'], gamma, eta_t, eta_s)
        return OpoParams(config.get('epsilon', 0.0), gamma, eta_t, eta_s)

    @property
    def lam(self):
        return self.gamma / 2. + self.epsilon

    @property
    def mu(self):
        return self.gamma / 2. - self.epsilon

    @property
    def eps_over_gamma(self):
        return self.epsilon / self.gamma

    def replace(self, **kwargs):
        values = self.to_dict()
        values.update(kwargs)
        return OpoParams(values['epsilon'], values['gamma'], values['eta_t'], values['eta_s'])

    def to_dict(self):
        return {'epsilon': self.epsilon, 'gamma': self.gamma, 'eta_t': self.eta_t, 'eta_s': self.eta_s}

    def __eq__(self, other):
        return isinstance(other, OpoParams) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(tuple(sorted(self.to_dict().items())))

    def __repr__(self):
        return 'OpoParams(epsilon={!r}, gamma={!r}, eta_t={!r}, eta_s={!r})'.format(self.epsilon, self.gamma, self.eta_t, self.eta_s)


class ClickTimes(object):
    """
    Ordered trigger click instants t_c1 <= ... <= t_cn.

    :param times: sequence of click times (at least one).
    """

    def __init__(self, times):
        times = np.atleast_1d(np.asarray(times, dtype=float))
        if times.ndim != 1 or times.size < 1:
            raise InvalidParameterError('at least one click time is required')
        if not np.all(np.isfinite(times)):
            raise InvalidParameterError('click times must be finite')
        if np.any(np.diff(times) < 0):
            raise InvalidParameterError('click times must be nondecreasing, got {}'.format(list(times)))
        self.times = times
        self.times.setflags(write=False)

    @staticmethod
    def from_pattern(pattern, n, span):
        """
        Click patterns used by the three-photon sweeps.

        :param pattern: 'equal' (equally spaced clicks) or 'coincident-pair' (t_c1 = t_c2,
        remaining clicks equally spaced up to the last one).
        :param n: number of clicks.
        :param span: distance between the first and the last click.
        """
        if n < 1:
            raise InvalidParameterError('n must be positive')
        span = float(span)
        if pattern == 'equal':
            return ClickTimes(np.linspace(0., span, n) if n > 1 else [0.])
        elif pattern in ('coincident-pair', 'coincident'):
            if n < 2:
                raise InvalidParameterError('the coincident-pair pattern needs at least two clicks')
            rest = np.linspace(0., span, n - 1) if n > 2 else np.array([0.])
            return ClickTimes(np.concatenate([[0.], rest]))
        raise InvalidParameterError('Unknown click pattern: ' + str(pattern))

    @property
    def n(self):
        return self.times.size

    @property
    def span(self):
        return float(self.times[-1] - self.times[0])

    def separations(self):
        """
        Matrix of absolute click separations |t_ci - t_cj|.
        """
        return np.abs(self.times[:, None] - self.times[None, :])

    def reversed(self):
        """
        Time-reversed click pattern (t -> -t), reordered.
        """
        return ClickTimes(-self.times[::-1])

    def __len__(self):
        return self.times.size

    def __iter__(self):
        return iter(self.times.tolist())

    def __getitem__(self, i):
        return float(self.times[i])

    def __repr__(self):
        return 'ClickTimes({})'.format(self.times.tolist())


class SqueezingParam(object):
    """
    Squeezing parameter r >= 0 of the pulsed two-mode model.
    """

    def __init__(self, r):
        r = float(r)
        if not np.isfinite(r) or r < 0:
            raise InvalidParameterError('the squeezing parameter must be nonnegative, got {}'.format(r))
        self.r = r

    def __float__(self):
        return self.r

    def __repr__(self):
        return 'SqueezingParam({!r})'.format(self.r)
