from dataclasses import replace

import numpy as np
import pytest

from obliquebie.errors import GeometryError, InfeasibleAngleError, ParameterError
from obliquebie.geometry import make_circle, make_kite
from obliquebie.system import (E_BLOCKS, H_BLOCKS, Impedance, ScatteringScene, assemble_K,
                               derive_params, rhs_incident, rhs_manufactured, solve,
                               split_solve)

COUPLING = [(2, 4), (2, 6), (4, 2), (4, 5), (5, 4), (5, 6), (6, 2), (6, 5)]


def test_derived_params_example1(example1):
    p = derive_params(example1.scene)
    assert p.k0 == pytest.approx(1.0)
    assert p.beta == pytest.approx(0.5)
    assert p.kappa0 == pytest.approx(0.8660254038, abs=1e-10)
    assert p.kappa1 == pytest.approx(2.3979157617, abs=1e-10)
    assert p.mu_t1 == pytest.approx(2 / 5.75)
    assert p.beta0 == pytest.approx(0.5 / 0.75)


def test_derived_params_example2():
    scene = ScatteringScene(2.0, np.pi / 4, 0.0, 2, 1, 4, 2, Impedance.constant(1),
                            make_circle((0, 0), 0.5), make_kite())
    p = derive_params(scene)
    assert (p.k0, p.beta, p.kappa0) == pytest.approx((2 * np.sqrt(2), 2.0, 2.0))
    assert p.kappa1 == pytest.approx(5.2915026221, abs=1e-10)


def test_normal_incidence_zero_beta(example1):
    p = derive_params(replace(example1.scene, theta=np.pi / 2))
    assert p.beta == 0.0 and p.beta0 == 0.0 and p.beta1 == 0.0


def test_infeasible_angle():
    scene = ScatteringScene(1.0, 0.1, 0.0, 4, 4, 1, 1, Impedance.constant(1),
                            make_circle((0, 0), 0.5), make_kite())
    with pytest.raises(InfeasibleAngleError):
        derive_params(scene)


@pytest.mark.parametrize("kwargs", [{"omega": -1.0}, {"theta": 0.0}, {"eps1": 0.0}, {"n0": 1}])
def test_scene_validation(example1, kwargs):
    with pytest.raises(ParameterError):
        replace(example1.scene, **kwargs)


def test_scene_rejects_non_nested(example1):
    with pytest.raises(GeometryError):
        replace(example1.scene, outer=make_kite(), inner=make_circle((0, 0), 0.5))


def test_impedance_rules():
    assert np.allclose(Impedance.constant(2)(np.zeros(3)), 2.0)
    lam = Impedance.reciprocal_cosine(1, 0.2)
    assert lam(np.array([0.0]))[0] == pytest.approx(1 / 1.2)
    with pytest.raises(ParameterError):
        Impedance.constant(-1)
    with pytest.raises(ParameterError):
        Impedance.reciprocal_cosine(1, 1.5)


@pytest.fixture(scope="module")
def small_system(example1):
    scene = example1.scene.with_n(16)
    p = derive_params(scene)
    grids = scene.grids()
    return scene, p, grids, assemble_K(p, grids, scene.impedance)


def test_structural_zero_blocks(small_system):
    *_, system = small_system
    assert system.matrix.shape == (6 * 32, 6 * 32)
    for rc in [(2, 1), (4, 3)]:
        assert not np.any(system.block(*rc))
    assert np.array_equal(system.K[4, 4], system.K[2, 2])
    assert np.array_equal(system.K[4, 6], system.K[2, 5])
    assert np.all(np.isfinite(system.matrix))


def test_normal_incidence_decouples(example1):
    scene = replace(example1.scene, theta=np.pi / 2).with_n(24)
    p = derive_params(scene)
    grids = scene.grids()
    system = assemble_K(p, grids, scene.impedance)
    for rc in COUPLING:
        assert not np.any(system.block(*rc)), rc
    for rhs in (rhs_incident(p, grids, 0.4), rhs_manufactured(p, grids, scene.impedance, example1.sources)):
        full = solve(system.with_rhs(rhs), p).vector()
        split = split_solve(system.with_rhs(rhs), p).vector()
        assert np.max(np.abs(full - split)) <= 1e-12 * max(1.0, np.max(np.abs(full)))


def test_split_solve_refuses_coupled(small_system):
    _, p, grids, system = small_system
    with pytest.raises(ValueError):
        split_solve(system.with_rhs(rhs_incident(p, grids, 0.0)), p)


def test_e_h_block_partition():
    assert sorted(E_BLOCKS + H_BLOCKS) == list(range(6))


def test_rhs_incident(small_system):
    scene, p, grids, _ = small_system
    g = rhs_incident(p, grids, 0.0)
    g0 = grids[0]
    # node t=0 of the circle is (0.5, 0)
    assert g[0] == pytest.approx(-2 * np.sin(np.pi / 3) * np.exp(0.5j * p.kappa0))
    assert not np.any(g[32:96]) and not np.any(g[128:])
    # n perpendicular to the incidence direction at t = pi/2 -> zero normal derivative
    assert abs(g[96 + 8]) < 1e-15


def test_rhs_incident_normal_unit_modulus(example1):
    scene = replace(example1.scene, theta=np.pi / 2, eps0=1.0).with_n(8)
    p = derive_params(scene)
    g = rhs_incident(p, scene.grids(), 1.0)
    assert np.allclose(np.abs(g[:16]), 2.0)


def test_zero_rhs_gives_zero(small_system):
    _, p, _, system = small_system
    d = solve(system.with_rhs(np.zeros(system.matrix.shape[0])), p)
    assert not np.any(d.vector())


def test_solve_residual_and_recovery(small_system, example1):
    scene, p, grids, system = small_system
    d = solve(system.with_rhs(rhs_manufactured(p, grids, scene.impedance, example1.sources)), p)
    assert d.residual <= 1e-12
    assert np.array_equal(d.psi0e, -(p.eps_t1 / p.eps_t0) * d.psi1e)
    assert np.array_equal(d.psi0h, -(p.mu_t1 / p.mu_t0) * d.psi1h)


def test_self_convergence_of_densities(example1):
    prev, diffs = None, []
    for n in (16, 32, 64):
        scene = example1.scene.with_n(n)
        p = derive_params(scene)
        grids = scene.grids()
        system = assemble_K(p, grids, scene.impedance)
        vec = solve(system.with_rhs(rhs_incident(p, grids, 0.7)), p).vector().reshape(6, -1)
        if prev is not None:
            diffs.append(np.max(np.abs(vec[:, ::2] - prev)))
        prev = vec
    assert diffs[1] * 10 <= diffs[0]


def test_nonpositive_impedance_rejected(small_system):
    _, p, grids, _ = small_system

    class Negative:
        def __call__(self, t):
            return -np.ones_like(t)

    with pytest.raises(ParameterError):
        assemble_K(p, grids, Negative())
