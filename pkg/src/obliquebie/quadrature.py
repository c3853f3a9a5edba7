"""Quadrature and differentiation rules on the periodic grid ``t_k = k pi / n``.

* :func:`trapezoid` for smooth periodic integrands,
* :func:`log_weights` for ``ln(4 sin^2((t - s)/2))``-singular integrands,
* :func:`hilbert_weights` for the principal value ``cot((s - t)/2)`` integral,
* :func:`diff_matrix` for exact differentiation of trigonometric polynomials.

All matrices are circulant of size ``2n x 2n``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import circulant


def nodes(n):
    return np.pi * np.arange(2 * n) / n


def _circulant_from_lag(lag_values):
    # entry (i, j) = lag_values[(i - j) mod 2n]
    return circulant(lag_values)


def trapezoid(samples, jacobians):
    """``(pi/n) sum_k f(t_k) |x'(t_k)|`` over the ``2n`` grid nodes."""
    samples = np.asarray(samples)
    jacobians = np.asarray(jacobians)
    if samples.shape[-1] != jacobians.shape[-1]:
        raise ValueError("samples and jacobians must have the same length")
    size = samples.shape[-1]
    if size % 2 or size < 2:
        raise ValueError("trapezoid rule expects 2n samples")
    return (2.0 * np.pi / size) * np.sum(samples * jacobians, axis=-1)


@dataclass(frozen=True, eq=False)
class LogWeights:
    """Weights ``R_j(t_i)`` of the logarithmic product rule (``matrix[i, j]``)."""

    n: int
    matrix: np.ndarray

    def apply(self, values, row=None):
        if row is None:
            return self.matrix @ values
        return self.matrix[row] @ values


def log_weights(n):
    """Kress weights for ``int_0^2pi ln(4 sin^2((t_i - s)/2)) f(s) ds``.

    ``R_j(t) = -(2pi/n) sum_{m=1}^{n-1} cos(m(t - t_j))/m - (pi/n^2) cos(n(t - t_j))``,
    exact for trigonometric polynomials of degree ``< n``.
    """
    if int(n) != n or n < 2:
        raise ValueError("log_weights needs n >= 2")
    n = int(n)
    lag = nodes(n)
    m = np.arange(1, n)
    first = -(2.0 * np.pi / n) * (np.cos(np.outer(lag, m)) / m).sum(axis=1)
    first -= (np.pi / n**2) * np.cos(n * lag)
    return LogWeights(n, _circulant_from_lag(first))


def hilbert_weights(n):
    """Weights for ``(1/2pi) PV int cot((s - t_i)/2) f(s) ds`` on the grid.

    For trigonometric interpolants the entries are
    ``W[i, j] = -(1/n) sum_{m=1}^{n-1} sin(m (t_i - t_j))``.
    """
    n = int(n)
    lag = nodes(n)
    m = np.arange(1, n)
    first = -(1.0 / n) * np.sin(np.outer(lag, m)).sum(axis=1)
    return _circulant_from_lag(first)


@dataclass(frozen=True, eq=False)
class DiffMatrix:
    """Spectral differentiation ``d/dt`` of node samples."""

    n: int
    matrix: np.ndarray

    def __matmul__(self, values):
        return self.matrix @ values


def diff_matrix(n):
    """Circulant ``D[i, j] = (1/2) (-1)^(i-j) cot((t_i - t_j)/2)``, zero diagonal."""
    if int(n) != n or n < 2:
        raise ValueError("diff_matrix needs n >= 2")
    n = int(n)
    k = np.arange(1, 2 * n)
    lag = np.zeros(2 * n)
    lag[1:] = 0.5 * (-1.0) ** k / np.tan(0.5 * np.pi * k / n)
    return DiffMatrix(n, _circulant_from_lag(lag))


def tangential_derivative(grid, samples, diff=None):
    """``d f / d tau`` at the nodes of ``grid``: ``(D f) / |x'|``."""
    diff = diff if diff is not None else diff_matrix(grid.n)
    return (diff.matrix @ samples) / grid.speed if np.ndim(samples) == 1 else \
        (diff.matrix @ samples) / grid.speed[:, None]
