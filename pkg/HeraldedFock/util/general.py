# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import numpy as np
from scipy.signal import fftconvolve


def trapezoid_weights(size, step):
    '''
    Trapezoid quadrature weights on a uniform grid.

    :param size: number of samples.
    :param step: grid spacing.
    '''
    w = np.full(size, float(step))
    w[0] = w[-1] = 0.5 * step
    return w


def kernel_lags(kernel, size, step):
    '''
    Samples of a stationary kernel k(tau) at all lags (-(size-1)..size-1)*step.
    '''
    lags = step * np.arange(-(size - 1), size)
    return kernel(lags)


def toeplitz_apply(lag_samples, v):
    '''
    Applies the symmetric Toeplitz matrix K_ij = k((i-j)h) to the columns of v.

    :param lag_samples: kernel samples at lags -(N-1)..N-1 (see kernel_lags).
    :param v: vector of length N or matrix N x m.
    '''
    v = np.asarray(v, dtype=float)
    n = v.shape[0]
    if lag_samples.size != 2 * n - 1:
        raise ValueError('expected {} lag samples, got {}'.format(2 * n - 1, lag_samples.size))
    if v.ndim == 1:
        return fftconvolve(v, lag_samples)[n - 1:2 * n - 1]
    return fftconvolve(v, lag_samples[:, None], axes=0)[n - 1:2 * n - 1, :]


def double_integral(f, g, lag_samples, weights):
    '''
    Trapezoid double integral of f(t) g(t') k(t - t') on a uniform grid.

    The kernel kink at t = t' lies on grid nodes, which splits the integrand at the diagonal.
    '''
    return float(np.dot(weights * f, toeplitz_apply(lag_samples, weights * g)))


def parse_range(text):
    '''
    Parses a sweep specification 'start:stop:step' (stop included when hit) or a comma separated list.
    '''
    if isinstance(text, (list, tuple, np.ndarray)):
        return np.asarray(text, dtype=float)
    text = str(text).strip()
    if ':' in text:
        parts = [float(p) for p in text.split(':')]
        if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
            raise ValueError('Invalid range specification: ' + text)
        start, stop, step = parts
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return start + step * np.arange(count)
    values = [float(p) for p in text.replace(' ', ',').split(',') if p]
    if not values:
        raise ValueError('Empty range specification')
    return np.asarray(values, dtype=float)

