# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import numpy as np

from .errors import GridError, NormalizationError, InvalidParameterError
from ..util.general import trapezoid_weights

# Defaults in units of 1/gamma
DEFAULT_STEP = 0.01
DEFAULT_WINDOW = 20.
NORM_TOLERANCE = 1e-8


class TimeGrid(object):
    """
    Uniform time grid t_k = start + k*step, k = 0..size-1, with trapezoid weights.

    :param start: first instant.
    :param step: spacing.
    :param size: number of samples.
    """

    def __init__(self, start, step, size):
        step = float(step)
        size = int(size)
        if not step > 0:
            raise GridError('grid step must be positive')
        if size < 3:
            raise GridError('a grid needs at least three samples')
        self.start = float(start)
        self.step = step
        self.size = size

    @staticmethod
    def around(click_times, gamma, step=None, window=None):
        """
        Grid covering [t_first - window, t_last + window] with the click instants on grid nodes.

        :param click_times: iterable of click instants (or ClickTimes).
        :param gamma: leakage rate; step and window default to 0.01/gamma and 20/gamma.
        :param step: grid spacing (default, 0.01/gamma).
        :param window: margin around the extreme clicks (default, 20/gamma).
        """
        gamma = float(gamma)
        if gamma <= 0:
            raise InvalidParameterError('gamma must be positive')
        step = DEFAULT_STEP / gamma if step is None else float(step)
        window = DEFAULT_WINDOW / gamma if window is None else float(window)
        times = np.asarray(list(click_times), dtype=float)
        # anchor the grid on the first click so that clicks sit on nodes
        first, last = times.min(), times.max()
        n_left = int(np.ceil(window / step))
        n_right = int(np.ceil((last - first + window) / step))
        return TimeGrid(first - n_left * step, step, n_left + n_right + 1)

    @property
    def times(self):
        return self.start + self.step * np.arange(self.size)

    @property
    def weights(self):
        return trapezoid_weights(self.size, self.step)

    @property
    def stop(self):
        return self.start + self.step * (self.size - 1)

    def index_of(self, t):
        """
        Index of the node nearest to t.
        """
        k = int(np.rint((float(t) - self.start) / self.step))
        if k < 0 or k >= self.size:
            raise GridError('instant {} lies outside the grid [{}, {}]'.format(t, self.start, self.stop))
        return k

    def same_as(self, other):
        return (self.size == other.size and np.isclose(self.step, other.step, rtol=1e-12, atol=0.)
                and np.isclose(self.start, other.start, rtol=0., atol=1e-9 * self.step))

    def __repr__(self):
        return 'TimeGrid(start={!r}, step={!r}, size={!r})'.format(self.start, self.step, self.size)


class SampledModeFunction(object):
    """
    Real temporal mode function sampled on a uniform grid, with unit L2 norm
    under the trapezoid rule.

    :param grid: TimeGrid the samples live on.
    :param values: real samples f(t_k).
    :param normalize: rescale the samples to unit norm instead of checking it (default, False).
    """

    def __init__(self, grid, values, normalize=False):
        values = np.asarray(values)
        if np.iscomplexobj(values):
            if np.any(np.abs(values.imag) > 0):
                raise GridError('mode functions must be real')
            values = values.real
        values = np.array(values, dtype=float)
        if values.shape != (grid.size,):
            raise GridError('expected {} samples, got shape {}'.format(grid.size, values.shape))
        self.grid = grid
        norm = np.sqrt(np.sum(grid.weights * values**2))
        if normalize:
            if norm == 0:
                raise NormalizationError('cannot normalize a vanishing mode function')
            values = values / norm
        elif abs(norm**2 - 1.) > NORM_TOLERANCE:
            raise NormalizationError('mode function norm^2 = {:.12g}, expected 1'.format(norm**2))
        self.values = values
        self.values.setflags(write=False)

    @property
    def step(self):
        return self.grid.step

    @property
    def times(self):
        return self.grid.times

    def norm(self):
        return float(np.sqrt(np.sum(self.grid.weights * self.values**2)))

    def check_same_grid(self, other):
        if not self.grid.same_as(other.grid):
            raise GridError('mode functions live on different grids: {} vs {}'.format(self.grid, other.grid))

    def inner(self, other):
        """
        Trapezoid approximation of the overlap integral of two mode functions.
        """
        self.check_same_grid(other)
        return float(np.sum(self.grid.weights * self.values * other.values))

    def distance(self, other):
        """
        L2 distance between two mode functions on the same grid.
        """
        self.check_same_grid(other)
        return float(np.sqrt(np.sum(self.grid.weights * (self.values - other.values)**2)))

    def value_at(self, t):
        return float(np.interp(t, self.grid.times, self.values))

    def __neg__(self):
        return SampledModeFunction(self.grid, -self.values, normalize=True)

    def __repr__(self):
        return 'SampledModeFunction(grid={!r}, peak={:.6g})'.format(self.grid, np.max(np.abs(self.values)))
