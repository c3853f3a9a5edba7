"""Fields evaluated from densities or closed forms.

Covers the manufactured point-source scene (boundary data and exact fields),
computed and exact far-field patterns, near-field grids and error norms.
"""

from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, PlacementError
from .geometry import (ANNULUS, EXTERIOR, REGION_NAMES, classify, default_clearance,
                       winding_number)
from .system import incident_field

FARFIELD_PHASE = np.exp(0.25j * np.pi)


@dataclass(frozen=True)
class SourcePoints:
    """``z1, z2`` inside the outer curve (fields of the exterior), ``z3, z4`` outside."""

    z1: tuple
    z2: tuple
    z3: tuple
    z4: tuple

    def as_array(self):
        return np.array([self.z1, self.z2, self.z3, self.z4], dtype=float)

    def check(self, outer, inner):
        """Raise :class:`PlacementError` if a source sits on the wrong side of a curve."""
        z = self.as_array()
        w_out = winding_number(z, outer.dense())
        w_in = winding_number(z, inner.dense())
        if np.any(np.abs(w_out[:2]) < 0.5) or np.any(np.abs(w_out[2:]) > 0.5):
            raise PlacementError("z1, z2 must lie inside the outer curve and z3, z4 outside")
        if np.any(np.abs(w_in[2:]) > 0.5):
            raise PlacementError("z3, z4 must not lie in the hole")


def _hankel_terms(points, z, kappa, normal=None, tangent=None):
    r = points - np.asarray(z, dtype=float)
    dist = np.hypot(r[:, 0], r[:, 1])
    if np.any(dist == 0.0):
        raise PlacementError("a source point coincides with a boundary node")
    h0, h1 = specfun.hankel1_01(kappa * dist)
    out = {"h0": h0}
    if normal is not None:
        out["n"] = kappa * h1 * (normal * r).sum(-1) / dist
    if tangent is not None:
        out["t"] = kappa * h1 * (tangent * r).sum(-1) / dist
    return out


def manufactured_data(params, grids, impedance, sources):
    """Boundary data ``f1..f6``: four arrays on the outer nodes, two on the inner ones."""
    g0, g1 = grids
    k0, k1, w = params.kappa0, params.kappa1, params.omega
    mt0, mt1, et0, et1 = params.mu_t0, params.mu_t1, params.eps_t0, params.eps_t1
    b0, b1 = params.beta0, params.beta1
    z1, z2, z3, z4 = sources.as_array()

    def on(grid, z, kappa):
        return _hankel_terms(grid.points, z, kappa, grid.normal, grid.tangent)

    a1, a2 = on(g0, z1, k0), on(g0, z2, k0)
    a3, a4 = on(g0, z3, k1), on(g0, z4, k1)
    f1 = a3["h0"] - a1["h0"]
    f2 = -mt1 * w * a4["n"] - b1 * a3["t"] + mt0 * w * a2["n"] + b0 * a1["t"]
    f3 = a4["h0"] - a2["h0"]
    f4 = -et1 * w * a3["n"] + b1 * a4["t"] + et0 * w * a1["n"] - b0 * a2["t"]

    lam = impedance(g1.t)
    c3, c4 = on(g1, z3, k1), on(g1, z4, k1)
    f5 = -mt1 * w * c4["n"] - b1 * c3["t"] + 1j * lam * c4["h0"]
    f6 = -lam * et1 * w * c3["n"] + lam * b1 * c4["t"] + 1j * c3["h0"]
    return f1, f2, f3, f4, f5, f6


def exact_fields(params, sources, points, region):
    """Exact point-source fields ``(e, h)`` in ``"exterior"`` or ``"annulus"``."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    z = sources.as_array()
    if region == "exterior":
        kappa, ze, zh = params.kappa0, z[0], z[1]
    elif region == "annulus":
        kappa, ze, zh = params.kappa1, z[2], z[3]
    else:
        raise DomainError(f"exact fields exist only in the exterior or the annulus, not {region!r}")
    out = []
    for src in (ze, zh):
        dist = np.hypot(*(points - src).T)
        if np.any(dist == 0.0):
            raise DomainError("field requested at a source point")
        out.append(specfun.hankel1_0(kappa * dist))
    return out[0], out[1]


def directions(t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return np.stack([np.cos(t), np.sin(t)], axis=-1)


def exact_farfield(params, z, t):
    """Far field of ``H0(kappa0 |x - z|)`` in directions ``(cos t, sin t)``."""
    xhat = directions(t)
    amp = -4j * FARFIELD_PHASE / np.sqrt(8.0 * np.pi * params.kappa0)
    return amp * np.exp(-1j * params.kappa0 * (xhat @ np.asarray(z, dtype=float)))


@dataclass(frozen=True, eq=False)
class FarFieldSamples:
    t: np.ndarray
    e: np.ndarray
    h: np.ndarray


def computed_farfield(params, grids, densities, t):
    """Far-field patterns ``(e, h)`` from the exterior Green representation."""
    g0 = grids[0]
    xhat = directions(t)
    k = params.kappa0
    phase = np.exp(-1j * k * (xhat @ g0.points.T))
    proj = xhat @ g0.normal.T
    w = g0.weights  # (pi/n)|x'| is the trapezoid weight over [0, 2pi]
    amp = FARFIELD_PHASE / np.sqrt(8.0 * np.pi * k)

    def pattern(phi, psi):
        return amp * (phase * (-1j * k * proj * phi - psi)) @ w

    return FarFieldSamples(np.atleast_1d(np.asarray(t, dtype=float)),
                           pattern(densities.phi0e, densities.psi0e),
                           pattern(densities.phi0h, densities.psi0h))


def farfield_error_l2(computed, exact):
    """``sqrt((2 pi / M) sum |computed - exact|^2)`` over ``M`` equispaced directions."""
    computed, exact = np.asarray(computed), np.asarray(exact)
    if computed.shape != exact.shape or computed.ndim != 1 or computed.size == 0:
        raise ValueError("far-field samples must be matching non-empty vectors")
    return float(np.sqrt(2.0 * np.pi / computed.size * np.sum(np.abs(computed - exact) ** 2)))


def evaluate_fields(params, grids, densities, points, region):
    """Representation formulas at off-boundary points of one region.

    Annulus: ``S_1(psi1) + S_1(psi2)`` with wavenumber ``kappa1``.
    Exterior: ``D_0(phi0) - S_0(psi0)`` with wavenumber ``kappa0`` (scattered part).
    """
    g0, g1 = grids
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    zero0 = np.zeros(g0.size, dtype=complex)
    zero1 = np.zeros(g1.size, dtype=complex)
    lp = specfun.layer_potentials
    if region == ANNULUS:
        k = params.kappa1
        e = (lp(points, g0.points, g0.normal, g0.weights, k, densities.psi1e, zero0)
             + lp(points, g1.points, g1.normal, g1.weights, k, densities.psi2e, zero1))
        h = (lp(points, g0.points, g0.normal, g0.weights, k, densities.psi1h, zero0)
             + lp(points, g1.points, g1.normal, g1.weights, k, densities.psi2h, zero1))
        return e, h
    if region == EXTERIOR:
        k = params.kappa0
        e = lp(points, g0.points, g0.normal, g0.weights, k, -densities.psi0e, densities.phi0e)
        h = lp(points, g0.points, g0.normal, g0.weights, k, -densities.psi0h, densities.phi0h)
        return e, h
    raise DomainError(f"no field representation in region {REGION_NAMES.get(region, region)}")


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """Near field on ``x_kj = (-c + k delta, -c + j delta)``, ``delta = 2c/(2m-1)``.

    Arrays are indexed ``[j, k]`` (row = y).  Masked cells hold ``nan``.
    """

    c: float
    m: int
    clearance: float
    x: np.ndarray
    y: np.ndarray
    region: np.ndarray
    e: np.ndarray
    h: np.ndarray
    e_total: np.ndarray
    h_total: np.ndarray

    @property
    def mask(self):
        return (self.region != EXTERIOR) & (self.region != ANNULUS)


def grid_axes(c, m):
    if c <= 0 or m < 1:
        raise ValueError("grid needs c > 0 and m >= 1")
    delta = 2.0 * c / (2 * m - 1)
    return -c + delta * np.arange(2 * m)


def near_field(params, grids, densities, c, m, phi_inc=None, clearance=None):
    """Fields on the square grid, masked in the hole and near either curve.

    ``e``/``h`` carry the scattered exterior field; ``e_total``/``h_total`` add
    the incident plane wave there (``h_inc = 0``) when ``phi_inc`` is given.
    """
    g0, g1 = grids
    axis = grid_axes(c, m)
    X, Y = np.meshgrid(axis, axis)
    pts = np.stack([X.ravel(), Y.ravel()], axis=-1)
    clearance = default_clearance(g0, g1) if clearance is None else float(clearance)
    region = classify(pts, g0.curve, g1.curve, clearance)
    e = np.full(len(pts), np.nan, dtype=complex)
    h = np.full(len(pts), np.nan, dtype=complex)
    for reg in (ANNULUS, EXTERIOR):
        sel = region == reg
        if np.any(sel):
            e[sel], h[sel] = evaluate_fields(params, grids, densities, pts[sel], reg)
    e_tot, h_tot = e.copy(), h.copy()
    ext = region == EXTERIOR
    if phi_inc is not None and np.any(ext):
        e_tot[ext] += incident_field(params, pts[ext], phi_inc)
    shape = X.shape
    return FieldGrid(float(c), int(m), clearance, axis, axis, region.reshape(shape),
                     e.reshape(shape), h.reshape(shape),
                     e_tot.reshape(shape), h_tot.reshape(shape))
