import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obliquebie import specfun
from obliquebie.errors import DomainError

mpmath.mp.dps = 30


def mp_reference(x):
    x = mpmath.mpf(x)
    j0, j1 = mpmath.besselj(0, x), mpmath.besselj(1, x)
    y0, y1 = mpmath.bessely(0, x), mpmath.bessely(1, x)
    lg = 2 / mpmath.pi * mpmath.log(x / 2)
    return [float(v) for v in (j0, j1, y0, y1, y0 - lg * j0, y1 - lg * j1)]


SAMPLES = np.concatenate([np.geomspace(1e-3, 100.0, 300), [1.999999, 2.0, 2.000001, 24.99999, 25.0, 25.00001]])
REFERENCE = np.array([mp_reference(x) for x in SAMPLES])


def test_matches_high_precision_oracle(backend):
    values = np.array(specfun.bessel01(SAMPLES))
    for got, ref in zip(values, REFERENCE.T):
        assert np.all(np.abs(got - ref) <= 1e-13 * np.maximum(1.0, np.abs(ref)))


def test_regular_parts_are_free_of_the_log(backend):
    x = np.array([1e-3, 1e-2, 3e-2])
    r0 = specfun.y0_regular(x)
    r1 = specfun.y1_regular(x)
    assert np.allclose(r0, 2 / np.pi * (np.euler_gamma - x**2 / 4 * (np.euler_gamma - 1)), atol=1e-8)
    assert np.allclose(r1 + 2 / (np.pi * x), x / np.pi * (np.euler_gamma - 0.5), atol=1e-6)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-3, max_value=200.0))
def test_wronskian(x):
    j0, j1, y0, y1, _, _ = specfun.bessel01(np.array([x]))
    assert abs((j1 * y0 - j0 * y1)[0] - 2 / (np.pi * x)) <= 1e-12 * max(1.0, 2 / (np.pi * x))


@pytest.mark.parametrize("x", [0.3, 1.7, 2.0, 9.0, 25.0, 60.0])
def test_derivative_relations_by_finite_differences(backend, x):
    h = 1e-5
    j0p = (specfun.bessel_j0(x + h) - specfun.bessel_j0(x - h)) / (2 * h)
    y0p = (specfun.bessel_y0(x + h) - specfun.bessel_y0(x - h)) / (2 * h)
    j1p = (specfun.bessel_j1(x + h) - specfun.bessel_j1(x - h)) / (2 * h)
    assert j0p == pytest.approx(-specfun.bessel_j1(x), abs=1e-9)
    assert y0p == pytest.approx(-specfun.bessel_y1(x), abs=1e-9)
    assert j1p == pytest.approx(specfun.bessel_j0(x) - specfun.bessel_j1(x) / x, abs=1e-9)


@pytest.mark.parametrize("edge", [2.0, 25.0])
def test_continuous_across_algorithm_switches(backend, edge):
    below = np.nextafter(edge, 0.0)
    above = np.nextafter(edge, np.inf)
    lo = np.array(specfun.bessel01(np.array([below])))[:4, 0]
    hi = np.array(specfun.bessel01(np.array([above])))[:4, 0]
    assert np.all(np.abs(lo - hi) < 1e-14)


def test_backends_agree(rng):
    if len(specfun.available_backends()) < 2:
        pytest.skip("compiled backend not built")
    x = rng.uniform(1e-3, 150.0, 5000)
    previous = specfun.set_backend("python")
    try:
        ref = np.array(specfun.bessel01(x))
    finally:
        specfun.set_backend(previous)
    specfun.set_backend("compiled")
    try:
        got = np.array(specfun.bessel01(x))
    finally:
        specfun.set_backend(previous)
    assert np.all(np.abs(got - ref) <= 2e-15 * np.maximum(1.0, np.abs(ref)))


def test_hankel_is_j_plus_iy():
    x = np.array([0.01, 1.0, 30.0])
    assert np.array_equal(specfun.hankel1_0(x), specfun.bessel_j0(x) + 1j * specfun.bessel_y0(x))
    h0, h1 = specfun.hankel1_01(x)
    assert np.array_equal(h1, specfun.hankel1_1(x))


def test_j_at_zero_and_scalar_returns():
    assert specfun.bessel_j0(0.0) == 1.0
    assert specfun.bessel_j1(0.0) == 0.0
    assert isinstance(specfun.bessel_y0(1.0), float)


@pytest.mark.parametrize("bad", [0.0, -1.0, np.nan, np.inf])
def test_y_domain_errors(bad):
    with pytest.raises(DomainError):
        specfun.bessel_y0(bad)
    with pytest.raises(DomainError):
        specfun.hankel1_1(bad)


def test_j_rejects_negative():
    with pytest.raises(DomainError):
        specfun.bessel_j0(-0.5)


def test_unknown_backend():
    with pytest.raises(ValueError):
        specfun.set_backend("fortran")


def test_layer_potentials_backends_agree(rng):
    nodes = np.c_[np.cos(np.linspace(0, 2 * np.pi, 40, endpoint=False)),
                  np.sin(np.linspace(0, 2 * np.pi, 40, endpoint=False))]
    normals = nodes.copy()
    weights = np.full(40, 2 * np.pi / 40)
    targets = rng.uniform(-3, 3, (300, 2)) * 0.25 + np.array([2.5, 0.0])
    a = rng.normal(size=40) + 1j * rng.normal(size=40)
    b = rng.normal(size=40) + 1j * rng.normal(size=40)
    results = []
    for name in specfun.available_backends():
        previous = specfun.set_backend(name)
        try:
            results.append(specfun.layer_potentials(targets, nodes, normals, weights, 1.3, a, b))
        finally:
            specfun.set_backend(previous)
    d = targets[:, None, :] - nodes[None]
    r = np.hypot(d[..., 0], d[..., 1])
    from scipy.special import hankel1
    proj = (normals[None] * d).sum(-1) / r
    ref = ((0.25j * hankel1(0, 1.3 * r) * a + 0.25j * 1.3 * hankel1(1, 1.3 * r) * proj * b) * weights).sum(-1)
    for res in results:
        assert np.allclose(res, ref, rtol=1e-12, atol=1e-13)
