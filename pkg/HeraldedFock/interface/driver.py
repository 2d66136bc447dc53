# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import copy
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd
from scipy.stats import ortho_group
from tqdm import tqdm

from ..__version__ import __version__
from ..core.errors import InvalidConfigError, InvalidParameterError
from ..core.params import ClickTimes, OpoParams
from ..methods.mode_optimization import OptimizerSettings, fidelity_curve, intensity_curve, optimal_mode_zero_intensity, \
    optimize_mode, refine_on_grid
from ..models.correlation import bunching_ratio
from ..models.fock import n_photon_fidelity_curve, three_photon_fidelity_curve, two_click_decomposition_curve
from ..models.two_mode import conditional_number_distribution, two_mode_fidelity, two_mode_fidelity_via_wigner
from ..oracles.wick import bunching_ratio_wick, detector_splitting_check
from ..util.general import parse_range
from .config_parser import COMMANDS, default_config

logger = logging.getLogger(__name__)

THREADS_ENV = 'HERALDED_FOCK_THREADS'


def thread_limit(requested):
    """
    Worker count: the requested number, capped by the HERALDED_FOCK_THREADS environment variable.
    """
    requested = max(1, int(requested or 1))
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            requested = min(requested, max(1, int(cap)))
        except ValueError:
            raise InvalidConfigError('{} must be an integer, got "{}"'.format(THREADS_ENV, cap))
    return requested


class RunConfig(object):
    """
    Validated run configuration.

    :param config: nested configuration dictionary (defaults merged).
    """

    def __init__(self, config):
        self.config = config
        self.command = config.get('command')
        if self.command not in COMMANDS:
            raise InvalidConfigError('unknown command {!r}; expected one of {}'.format(self.command, ', '.join(COMMANDS)))

        p = config['params']
        ratios = p.get('eps_over_gamma')
        if p.get('epsilon') is not None:
            ratios = [float(e) / float(p.get('gamma', 1.0)) for e in np.atleast_1d(p['epsilon'])]
        self.eps_over_gamma = [float(r) for r in np.atleast_1d(ratios)]
        if not self.eps_over_gamma:
            raise InvalidConfigError('no value of eps/gamma given')
        self.params = [OpoParams.from_ratio(r, p.get('gamma', 1.0), p.get('eta_t', 1.0), p.get('eta_s', 1.0))
                       for r in self.eps_over_gamma]

        self.clicks = ClickTimes(config['clicks']['times'])
        self.settings = OptimizerSettings.fromConfig(config['optimizer'], config['grid'])
        try:
            self.sweep = parse_range(config['sweep']['range'])
        except ValueError as e:
            raise InvalidConfigError(str(e))
        if self.sweep.size == 0:
            raise InvalidConfigError('empty sweep range')
        self.threads = thread_limit(config['resources'].get('threads', 1))
        self.output = config['output']

    @staticmethod
    def fromConfig(config):
        return RunConfig(config)

    def metadata(self):
        return {'command': self.command,
                'params': [params.to_dict() for params in self.params],
                'clicks': self.clicks.times.tolist(),
                'version': __version__,
                'settings': self.settings.to_dict()}


class FockDriver(object):
    """
    The class for driving a run according to the configuration.
    """

    def __init__(self, config=None, outputEng=None):

        if config is None:
            self.config = copy.deepcopy(default_config)
        else:
            self.config = config
        self.outputEng = outputEng
        self.flagged = False

    def _map(self, run_config, function, items, description):
        """
        Evaluates the sweep points on the worker pool; results come back in input order.
        """
        items = list(items)
        progress = tqdm(total=len(items), desc=description, disable=len(items) < 2, leave=False)

        def task(item):
            value = function(item)
            progress.update(1)
            return value

        try:
            if run_config.threads == 1:
                return [task(item) for item in items]
            with ThreadPoolExecutor(max_workers=run_config.threads) as executor:
                return list(executor.map(task, items))
        finally:
            progress.close()

    def _two_mode(self, rc):
        n_max = int(self.config['two_mode'].get('n_max', 50))
        rows = []
        for r in np.atleast_1d(self.config['two_mode']['r']):
            distribution = conditional_number_distribution(r, n_max)
            rows.append([float(r), two_mode_fidelity(r), distribution[2], two_mode_fidelity_via_wigner(r),
                         distribution.tail, distribution.tail_bound])
        return pd.DataFrame(rows, columns=['r', 'F2_exact', 'p2', 'F2_wigner', 'tail', 'tail_bound'])

    def _fidelity_sweep(self, rc):
        use_optimal = bool(self.config['optimizer'].get('use_optimal', True))
        frames = []
        for params in rc.params:
            mapper = lambda f, items: self._map(rc, f, items, 'eps/gamma={:g}'.format(params.eps_over_gamma))
            frame = fidelity_curve(params, rc.sweep, use_optimal, rc.settings, mapper=mapper)
            frame.insert(0, 'eps_over_gamma', params.eps_over_gamma)
            frames.append(frame)
        return pd.concat(frames, ignore_index=True)

    def _intensity_sweep(self, rc):
        p = rc.params[0]
        gamma_dt = float(rc.clicks.span * p.gamma)
        mapper = lambda f, items: self._map(rc, f, items, 'eps/gamma')
        return intensity_curve(rc.sweep, gamma_dt, p.gamma, p.eta_t, p.eta_s, rc.settings, mapper=mapper)

    def _optimize_mode(self, rc):
        refine = int(self.config['optimizer'].get('refine_iters') or 0)
        frames = []
        for params in rc.params:
            result = optimize_mode(params, rc.clicks, rc.settings)
            if refine > 0 and params.epsilon > 0:
                result = refine_on_grid(params, rc.clicks, start=result.mode, iterations=refine, settings=rc.settings)
            frame = result.to_frame()
            zero_mode = optimal_mode_zero_intensity(rc.clicks[0], rc.clicks[1], params.gamma, result.mode.grid)
            frame['f_zero_intensity'] = zero_mode.values
            frame.insert(0, 'eps_over_gamma', params.eps_over_gamma)
            frame['F2'] = result.fidelity
            frame['F2_zero_intensity_mode'] = result.zero_intensity_fidelity
            frame['converged'] = result.converged
            frames.append(frame)
        return pd.concat(frames, ignore_index=True)

    def _fock_n(self, rc):
        n = int(self.config['fock']['n'])
        pattern = self.config['fock'].get('pattern', 'equal')
        gamma = rc.params[0].gamma
        if n == 2:
            return two_click_decomposition_curve(rc.sweep, gamma)
        if n == 3:
            return three_photon_fidelity_curve(pattern, rc.sweep, gamma)
        if n < 2:
            raise InvalidParameterError('fock-n needs n >= 2')
        return n_photon_fidelity_curve(n, pattern, rc.sweep, gamma)

    def _split_coefficients(self, n):
        """
        Beam splitter network rows and the detector of every click, clicks assigned round robin.
        """
        split = str(self.config['wick'].get('split', '50/50')).lower()
        if split in ('none', '1'):
            coeffs = np.array([[1.]])
        elif split == '50/50':
            k = 1. / np.sqrt(2.)
            coeffs = np.array([[k, k], [k, -k]])
        elif split.startswith('random'):
            try:
                size = int(split[len('random'):] or 3)
            except ValueError:
                raise InvalidConfigError('unknown split {!r}; use none, 50/50 or randomN'.format(split))
            coeffs = ortho_group.rvs(size, random_state=int(self.config['wick'].get('seed', 0)))
        else:
            raise InvalidConfigError('unknown split {!r}; use none, 50/50 or randomN'.format(split))
        return coeffs, [i % coeffs.shape[0] for i in range(n)]

    def _wick_check(self, rc):
        coeffs, detectors = self._split_coefficients(rc.clicks.n)
        if self.config['wick'].get('detectors') is not None:
            detectors = [int(d) for d in self.config['wick']['detectors']]
        params = rc.params[0]
        report = detector_splitting_check(rc.clicks, coeffs, params, detectors=detectors)
        return pd.DataFrame(report.to_rows(), columns=['moment', 'unsplit', 'split', 'relative_deviation'])

    def _bunching(self, rc):
        rows = []
        for params in rc.params:
            for dt in rc.sweep:
                rows.append([params.eps_over_gamma, float(dt), bunching_ratio(params, dt / params.gamma),
                             bunching_ratio_wick(params, dt / params.gamma)])
        return pd.DataFrame(rows, columns=['eps_over_gamma', 'gamma_dt', 'bunching_ratio', 'bunching_ratio_wick'])

    _commands = {
        'two-mode': _two_mode,
        'fidelity-sweep': _fidelity_sweep,
        'intensity-sweep': _intensity_sweep,
        'optimize-mode': _optimize_mode,
        'fock-n': _fock_n,
        'wick-check': _wick_check,
        'bunching': _bunching,
    }

    def run(self):
        """
        Runs the configured command, writes its table and returns it.
        """
        rc = RunConfig.fromConfig(self.config)
        start = time.time()
        frame = self._commands[rc.command](self, rc)
        logger.info('%s finished in %.2f s', rc.command, time.time() - start)

        if 'converged' in frame.columns and not frame['converged'].astype(bool).all():
            self.flagged = True
            logger.warning('%d rows did not converge', int((~frame['converged'].astype(bool)).sum()))

        if self.outputEng is None:
            from .output import OutputEng
            self.outputEng = OutputEng(rc.output)
        self.outputEng.save(frame, rc.metadata())
        return frame
