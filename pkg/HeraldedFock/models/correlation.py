# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

"""
Two-time correlation functions of the twin beams of a nondegenerate OPO below
threshold, their low-intensity forms, the exponential mode functions g_i and
their overlaps, and the bunching ratio of trigger clicks.

Kernels are evaluated in units where gamma = 1 and scaled back, so every kernel
has the units of a rate. With that convention the integral of a mode function
pair against a kernel, int int f(t) f'(t') k(t - t') dt dt', is dimensionless.
"""

import logging

import numpy as np

from ..core.errors import DegenerateConditioningError, GridTruncationError, InvalidParameterError
from ..core.grid import TimeGrid, SampledModeFunction

logger = logging.getLogger(__name__)

TRUNCATION_TOLERANCE = 1e-6


def _as_output(value, tau):
    return float(value) if np.ndim(tau) == 0 else value


def _dimensionless(params, tau):
    e = params.epsilon / params.gamma
    x = params.gamma * np.abs(np.asarray(tau, dtype=float))
    return e, 0.5 + e, 0.5 - e, x


def cross_correlation(params, tau):
    """
    <a_+(t) a_-(t')> = (lam^2 - mu^2)/4 (e^{-mu|tau|}/(2 mu) + e^{-lam|tau|}/(2 lam)).

    :param params: OpoParams.
    :param tau: time difference t - t' (scalar or array).
    """
    if params.epsilon == 0:
        return _as_output(np.zeros(np.shape(tau)), tau)
    e, lam, mu, x = _dimensionless(params, tau)
    value = e / 2. * (np.exp(-mu * x) / (2 * mu) + np.exp(-lam * x) / (2 * lam))
    return _as_output(params.gamma * value, tau)


def auto_correlation(params, tau):
    """
    <a_+^dag(t) a_+(t')> = (lam^2 - mu^2)/4 (e^{-mu|tau|}/(2 mu) - e^{-lam|tau|}/(2 lam)).

    The difference is rearranged as e^{-mu x} [2 eps - mu expm1(-2 eps x)]/(2 lam mu)
    so that no cancellation occurs at small eps.
    """
    if params.epsilon == 0:
        return _as_output(np.zeros(np.shape(tau)), tau)
    e, lam, mu, x = _dimensionless(params, tau)
    bracket = np.exp(-mu * x) * (2 * e - mu * np.expm1(-2 * e * x)) / (2 * lam * mu)
    return _as_output(params.gamma * e / 2. * bracket, tau)


def cross_correlation_low_intensity(params, tau):
    """
    Small eps/gamma form sqrt(2 eps^2/gamma) sqrt(gamma/2) e^{-gamma|tau|/2} = eps e^{-gamma|tau|/2}.
    """
    x = params.gamma * np.abs(np.asarray(tau, dtype=float))
    return _as_output(params.epsilon * np.exp(-x / 2.), tau)


def auto_correlation_low_intensity(params, tau):
    """
    Small eps/gamma form (2 eps^2/gamma)(1 + gamma|tau|/2) e^{-gamma|tau|/2}.
    """
    x = params.gamma * np.abs(np.asarray(tau, dtype=float))
    return _as_output(2 * params.epsilon**2 / params.gamma * (1 + x / 2.) * np.exp(-x / 2.), tau)


def twin_beam_intensity(params):
    """
    Dimensionless twin beam intensity <a_+^dag(t) a_+(t)>/gamma.
    """
    return auto_correlation(params, 0.) / params.gamma


def g_values(click_time, gamma, t):
    """
    g_i(t) = sqrt(gamma/2) e^{-(gamma/2)|t - t_ci|} evaluated at t.
    """
    t = np.asarray(t, dtype=float)
    return np.sqrt(gamma / 2.) * np.exp(-gamma / 2. * np.abs(t - click_time))


def g_mode(click_time, gamma, grid=None, step=None, window=None):
    """
    The exponential mode function g_i centered at a click, sampled on a grid.

    :param click_time: click instant t_ci.
    :param gamma: leakage rate.
    :param grid: TimeGrid (default, a grid built around the click with the default step and window).
    :param step: grid spacing when the grid is built here.
    :param window: grid margin when the grid is built here.

    .. Note:: the samples are renormalized on the grid once the continuum mass inside the
    grid has been checked against the truncation tolerance.
    """
    gamma = float(gamma)
    if gamma <= 0:
        raise InvalidParameterError('gamma must be positive')
    if grid is None:
        grid = TimeGrid.around([click_time], gamma, step=step, window=window)
    left = max(click_time - grid.start, 0.)
    right = max(grid.stop - click_time, 0.)
    mass = 1. - 0.5 * np.exp(-gamma * left) - 0.5 * np.exp(-gamma * right)
    if click_time < grid.start or click_time > grid.stop:
        mass = 0.
    if mass < 1. - TRUNCATION_TOLERANCE:
        raise GridTruncationError('grid holds only {:.9f} of the norm of g at t = {}; widen the window'.format(mass, click_time))
    return SampledModeFunction(grid, g_values(click_time, gamma, grid.times), normalize=True)


def overlap(t_ci, t_cj, gamma):
    """
    I_ij = int g_i g_j dt = (1 + (gamma/2)|t_ci - t_cj|) e^{-(gamma/2)|t_ci - t_cj|}.
    """
    x = float(gamma) / 2. * np.abs(np.asarray(t_ci, dtype=float) - np.asarray(t_cj, dtype=float))
    value = (1 + x) * np.exp(-x)
    return float(value) if np.ndim(value) == 0 else value


def gram_matrix(clicks, gamma):
    """
    Matrix of overlaps I_ij for all pairs of clicks.
    """
    times = np.asarray(list(clicks), dtype=float)
    return overlap(times[:, None], times[None, :], gamma)


def bunching_ratio(params, dt):
    """
    Normalized second-order correlation of trigger clicks separated by dt,
    1 + (auto(dt)/auto(0))^2; it decreases from two to one as |dt| grows.
    """
    if params.epsilon == 0:
        raise DegenerateConditioningError('the bunching ratio is undefined at epsilon = 0 (no trigger clicks)')
    ratio = np.asarray(auto_correlation(params, dt)) / auto_correlation(params, 0.)
    return _as_output(1. + ratio**2, dt)
