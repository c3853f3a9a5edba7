import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obliquebie.errors import GeometryError
from obliquebie.geometry import (ANNULUS, EXTERIOR, HOLE, NEAR_BOUNDARY, apple, check_nested,
                                 classify, default_clearance, distance_to_polygon, frame,
                                 make_circle, make_grid, make_kite, make_radial, peanut,
                                 spectral_radial, winding_number)


def test_kite_points():
    kite = make_kite()
    assert np.allclose(kite.position(0.0), [0.1, 0.1])
    assert np.allclose(kite.position(np.pi), [-0.3, 0.1])


@pytest.mark.parametrize("curve", [make_circle((0.1, -0.2), 0.5), make_kite(),
                                   make_radial(peanut()), make_radial(apple(), (0.1, 0.0))])
def test_derivatives_match_finite_differences(curve):
    t = np.linspace(0, 2 * np.pi, 37)
    h = 1e-6
    d1 = (curve.position(t + h) - curve.position(t - h)) / (2 * h)
    d2 = (curve.derivative(t + h) - curve.derivative(t - h)) / (2 * h)
    assert np.allclose(curve.derivative(t), d1, atol=1e-8)
    assert np.allclose(curve.second_derivative(t), d2, atol=1e-7)


def test_frame_orientation_on_circle():
    fr = frame(make_circle((0, 0), 2.0), np.array([0.0, np.pi / 2]))
    # counterclockwise circle: outward normal, tangent rotated +90 degrees from it
    assert np.allclose(fr.normal, [[1, 0], [0, 1]], atol=1e-15)
    assert np.allclose(fr.tangent, [[0, 1], [-1, 0]], atol=1e-15)
    assert np.allclose(fr.speed, 2.0)


def test_grid_weights_integrate_length():
    grid = make_grid(make_circle((0, 0), 0.5), 16)
    assert grid.size == 32
    assert grid.weights.sum() == pytest.approx(np.pi)
    assert grid.mesh_width() == pytest.approx(2 * np.pi * 0.5 / 16)


def test_winding_and_distance():
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    pts = np.array([[0.5, 0.5], [2.0, 0.5], [0.5, -1.0], [0.999, 0.001]])
    assert list(winding_number(pts, square)) == [1, 0, 0, 1]
    assert list(winding_number(pts, square[::-1])) == [-1, 0, 0, -1]
    assert np.allclose(distance_to_polygon(pts, square), [0.5, 1.0, 1.0, 0.001])


@settings(max_examples=50, deadline=None)
@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_winding_matches_angle_sum(x, y):
    poly = make_kite().dense(400)
    u = poly - [x, y]
    v = np.roll(poly, -1, axis=0) - [x, y]
    ang = np.arctan2(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0], (u * v).sum(-1)).sum() / (2 * np.pi)
    if np.min(np.hypot(*u.T)) > 1e-6:
        assert winding_number(np.array([[x, y]]), poly)[0] == round(ang)


def test_nesting_check():
    check_nested(make_circle((0, 0), 0.5), make_kite())
    with pytest.raises(GeometryError):
        check_nested(make_kite(), make_circle((0, 0), 0.5))


def test_transcribed_peanut_apple_do_not_nest():
    outer = make_radial(peanut(0.5, 0.1))
    for offset in [(-0.25, 0.05), (0.25, -0.05)]:
        with pytest.raises(GeometryError):
            check_nested(outer, make_radial(apple(), offset))


def test_classify_regions():
    outer, inner = make_circle((0, 0), 0.5), make_kite()
    pts = np.array([[0.0, -0.35], [-0.2, 0.1], [2.0, 0.0], [0.5, 0.0]])
    assert list(classify(pts, outer, inner, 0.02)) == [ANNULUS, HOLE, EXTERIOR, NEAR_BOUNDARY]


def test_default_clearance_is_max_mesh_width():
    g0 = make_grid(make_circle((0, 0), 0.5), 32)
    g1 = make_grid(make_kite(), 32)
    assert default_clearance(g0, g1) == max(g0.mesh_width(), g1.mesh_width())


def test_spectral_radial_reproduces_peanut():
    rule = peanut()
    fit = spectral_radial(rule.r, modes=64)
    t = np.linspace(0, 2 * np.pi, 50)
    assert np.allclose(fit.r(t), rule.r(t), atol=1e-12)
    assert np.allclose(fit.dr(t), rule.dr(t), atol=1e-10)


def test_rejects_clockwise_or_degenerate():
    with pytest.raises(GeometryError):
        make_circle((0, 0), -1.0)
    with pytest.raises(GeometryError):
        make_radial(apple(c0=-1.0))
