import numpy as np
import pytest

from obliquebie.geometry import make_circle, make_grid
from obliquebie.quadrature import (diff_matrix, hilbert_weights, log_weights, nodes,
                                   tangential_derivative, trapezoid)


@pytest.mark.parametrize("n", [8, 32, 128])
def test_log_rule_exact_on_cosines(n):
    R = log_weights(n).matrix
    t = nodes(n)
    for m in range(1, n):
        assert (R[0] @ np.cos(m * t)) == pytest.approx(-2 * np.pi / m, abs=1e-12)
    assert R[0].sum() == pytest.approx(0.0, abs=1e-12)


def test_log_rule_shifted_rows():
    n = 16
    R = log_weights(n).matrix
    t = nodes(n)
    f = np.cos(3 * t)
    # int ln(4 sin^2((t_i - s)/2)) cos(3s) ds = -(2 pi/3) cos(3 t_i)
    assert np.allclose(R @ f, -(2 * np.pi / 3) * np.cos(3 * t), atol=1e-12)


def test_trapezoid_spectral_self_convergence():
    def integral(n):
        t = nodes(n)
        return trapezoid(np.exp(np.cos(t)) * np.sin(np.sin(t) + 1.0), np.ones_like(t))
    assert abs(integral(32) - integral(64)) < 1e-13
    assert abs(integral(4) - integral(64)) > 1e-6


def test_trapezoid_errors():
    with pytest.raises(ValueError):
        trapezoid(np.ones(4), np.ones(5))
    with pytest.raises(ValueError):
        trapezoid(np.ones(3), np.ones(3))


def test_diff_matrix_exact_for_trig_polynomials():
    n = 12
    t = nodes(n)
    D = diff_matrix(n)
    for m in range(1, n):
        assert np.allclose(D @ np.sin(m * t), m * np.cos(m * t), atol=1e-11)
    assert np.allclose(D.matrix.sum(axis=1), 0.0, atol=1e-13)


def test_diff_matrix_spectral_on_analytic():
    errs = []
    for n in (8, 16, 32):
        t = nodes(n)
        errs.append(np.max(np.abs(diff_matrix(n) @ np.exp(np.cos(t)) + np.sin(t) * np.exp(np.cos(t)))))
    assert errs[2] < 1e-12 < errs[0]


def test_hilbert_weights_conjugate_pairs():
    n = 16
    t = nodes(n)
    W = hilbert_weights(n)
    assert np.allclose(W @ np.cos(2 * t), -np.sin(2 * t), atol=1e-13)
    assert np.allclose(W @ np.sin(2 * t), np.cos(2 * t), atol=1e-13)
    assert np.allclose(W @ np.ones_like(t), 0.0, atol=1e-13)


def test_tangential_derivative_on_circle():
    grid = make_grid(make_circle((0, 0), 0.5), 16)
    f = grid.points[:, 0]  # x = 0.5 cos t, d/dtau = tau_x = -sin t
    assert np.allclose(tangential_derivative(grid, f), -np.sin(grid.t), atol=1e-12)


@pytest.mark.parametrize("bad", [1, 0])
def test_small_n_rejected(bad):
    with pytest.raises(ValueError):
        log_weights(bad)
    with pytest.raises(ValueError):
        diff_matrix(bad)
