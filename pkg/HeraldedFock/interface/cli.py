# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

"""
Command line front end. Flags map onto dotted configuration keys and override
the values of the configuration file, which override the defaults.
"""

import argparse
import copy
import logging
import sys

from ..__version__ import __version__
from ..core.errors import DegenerateConditioningError, GridError, HeraldedFockError, InvalidConfigError, \
    NumericalConvergenceError
from .config_parser import default_config, parser as config_parser, set_dotted
from .driver import FockDriver

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def _common_arguments():
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument('--config', default=None, help='JSON or flat key = value configuration file')
    common.add_argument('--eps-over-gamma', dest='params.eps_over_gamma', type=float, nargs='+', default=S,
                        help='nonlinear gain in units of gamma (several values give several curves)')
    common.add_argument('--epsilon', dest='params.epsilon', type=float, nargs='+', default=S,
                        help='nonlinear gain coefficient in the units of gamma')
    common.add_argument('--gamma', dest='params.gamma', type=float, default=S, help='output mirror leakage rate')
    common.add_argument('--eta-t', dest='params.eta_t', type=float, default=S, help='trigger detector efficiency')
    common.add_argument('--eta-s', dest='params.eta_s', type=float, default=S, help='signal detector efficiency')
    common.add_argument('--clicks', dest='clicks.times', type=float, nargs='+', default=S, help='trigger click times')
    common.add_argument('--step', dest='grid.step', type=float, default=S, help='grid step in units of 1/gamma')
    common.add_argument('--window', dest='grid.window', type=float, default=S,
                        help='half width of the grid around the clicks in units of 1/gamma')
    common.add_argument('--threads', dest='resources.threads', type=int, default=S, help='worker pool size')
    common.add_argument('-o', '--output', dest='output.path', default=S, help='output file (default, stdout)')
    common.add_argument('--format', dest='output.format', choices=['csv', 'json'], default=S)
    common.add_argument('-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug messages')
    return common


def _optimizer_arguments(sub):
    S = argparse.SUPPRESS
    sub.add_argument('--basis-size', dest='optimizer.basis_size', type=int, default=S)
    sub.add_argument('--max-iters', dest='optimizer.max_iters', type=int, default=S)
    sub.add_argument('--tol', dest='optimizer.tol', type=float, default=S)
    sub.add_argument('--restarts', dest='optimizer.restarts', type=int, default=S)
    sub.add_argument('--method', dest='optimizer.method', default=S, help='nelder-mead or lbfgs')
    sub.add_argument('--seed', dest='optimizer.seed', type=int, default=S)
    sub.add_argument('--trigger-width', dest='optimizer.trigger_width', type=float, default=S,
                     help='width of the top hat trigger modes (default, one grid step)')


def build_parser():
    """
    Argument parser with one subcommand per table the package produces.
    """
    S = argparse.SUPPRESS
    common = _common_arguments()
    main = argparse.ArgumentParser(prog='heraldedfock',
                                   description='Heralded Fock states from a continuous wave OPO',
                                   formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    main.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    commands = main.add_subparsers(dest='command', metavar='command')
    commands.required = True

    sub = commands.add_parser('two-mode', parents=[common], help='pulsed two-mode reference')
    sub.add_argument('--r', dest='two_mode.r', type=float, nargs='+', default=S, help='squeezing parameters')
    sub.add_argument('--n-max', dest='two_mode.n_max', type=int, default=S)

    sub = commands.add_parser('fidelity-sweep', parents=[common], help='F2 against the click separation')
    sub.add_argument('--dt-range', dest='sweep.range', default=S, help='gamma dt values, start:stop:step or a list')
    sub.add_argument('--no-optimize', dest='optimizer.use_optimal', action='store_false', default=S,
                     help='only evaluate the zero intensity mode')
    _optimizer_arguments(sub)

    sub = commands.add_parser('optimize-mode', parents=[common], help='optimal signal mode function for two clicks')
    _optimizer_arguments(sub)
    sub.add_argument('--refine-iters', dest='optimizer.refine_iters', type=int, default=S,
                     help='gradient steps on the grid samples after the basis optimization')

    sub = commands.add_parser('fock-n', parents=[common], help='low intensity n-photon fidelity')
    sub.add_argument('--n', dest='fock.n', type=int, default=S)
    sub.add_argument('--pattern', dest='fock.pattern', choices=['equal', 'coincident-pair'], default=S)
    sub.add_argument('--range', dest='sweep.range', default=S, help='gamma |t_cn - t_c1| values')

    sub = commands.add_parser('wick-check', parents=[common], help='detector splitting check by Wick pairings')
    sub.add_argument('--split', dest='wick.split', default=S, help='none, 50/50 or randomN')
    sub.add_argument('--detectors', dest='wick.detectors', type=int, nargs='+', default=S)
    sub.add_argument('--seed', dest='wick.seed', type=int, default=S)

    sub = commands.add_parser('intensity-sweep', parents=[common], help='F2 against eps/gamma')
    sub.add_argument('--range', dest='sweep.range', default=S, help='eps/gamma values')
    _optimizer_arguments(sub)

    sub = commands.add_parser('bunching', parents=[common], help='trigger bunching ratio')
    sub.add_argument('--dt-range', dest='sweep.range', default=S, help='gamma dt values')

    return main


def configure_logging(verbosity):
    level = _LOG_LEVELS[min(int(verbosity), len(_LOG_LEVELS) - 1)]
    logging.basicConfig(level=level, stream=sys.stderr, format='%(asctime)s %(name)s %(levelname)s: %(message)s')


def config_from_arguments(args):
    """
    Merges defaults, the configuration file and the flags, in increasing precedence.
    """
    flags = dict(vars(args))
    path = flags.pop('config', None)
    flags.pop('verbose', None)
    config = config_parser(path) if path else copy.deepcopy(default_config)
    config['command'] = flags.pop('command')
    if 'params.eps_over_gamma' in flags:
        config['params']['epsilon'] = None
    for key, value in sorted(flags.items()):
        set_dotted(config, key, value)
    return config


def main(argv=None):
    """
    Runs one command; returns the exit status.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = config_from_arguments(args)
        driver = FockDriver(config)
        driver.run()
    except (InvalidConfigError, GridError) as e:
        logger.error('invalid configuration: %s', e)
        return EXIT_CONFIG
    except (NumericalConvergenceError, DegenerateConditioningError) as e:
        logger.error('numerical failure: %s', e)
        return EXIT_NUMERICAL
    except HeraldedFockError as e:
        logger.error('%s', e)
        return EXIT_CONFIG
    if driver.flagged:
        return EXIT_NUMERICAL
    return EXIT_OK
