"""Discrete boundary integral operators between node grids.

Block ``(family, k, l, j)`` maps density samples on curve ``j`` to samples on
curve ``l`` using the fundamental solution ``Phi_k = (i/4) H0(kappa_k |x-y|)``:

    S   Phi_k                  D   dPhi_k/dn(y)
    NS  dPhi_k/dn(x)           TS  dPhi_k/dtau(x)
    ND  d2Phi_k/dn(x)dn(y)     (self blocks via Maue's identity)

Self blocks (``l == j``) split every kernel as
``K(t, s) = K1(t, s) ln(4 sin^2((t-s)/2)) + K2(t, s)`` and apply the
logarithmic product rule to the first part and the trapezoid rule to the
second. Blocks are principal-value operators; jump terms belong to the
system assembly.
"""

from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ParameterError, PlacementError
from .geometry import default_clearance, distance_to_polygon
from .quadrature import diff_matrix, hilbert_weights, log_weights

FAMILIES = ("S", "D", "NS", "ND", "TS")
INV_4PI = 1.0 / (4.0 * np.pi)


@dataclass(frozen=True, eq=False)
class OperatorBlock:
    family: str
    k: int
    l: int
    j: int
    matrix: np.ndarray

    def __matmul__(self, density):
        return self.matrix @ density

    @property
    def shape(self):
        return self.matrix.shape


def _check_kappa(kappa):
    if not np.isfinite(kappa) or kappa <= 0.0:
        raise ParameterError(f"wavenumber must be positive, got {kappa}")
    return float(kappa)


class _SelfKernels:
    """Split kernels of all families on one curve for one wavenumber."""

    def __init__(self, grid, kappa):
        n = grid.n
        size = 2 * n
        self.grid = grid
        self.kappa = kappa
        t = grid.t
        lag = t[:, None] - t[None, :]
        diag = np.eye(size, dtype=bool)
        d = grid.points[:, None, :] - grid.points[None, :, :]
        r = np.hypot(d[..., 0], d[..., 1])
        r[diag] = 1.0
        z = kappa * r
        j0, j1, _, _, r0, r1 = specfun.bessel01(z)
        sin_half = np.abs(np.sin(0.5 * lag))
        sin_half[diag] = 1.0
        lam = np.log(z / (4.0 * sin_half))
        lam[diag] = np.log(0.5 * kappa * grid.speed)
        j0[diag] = 1.0
        j1[diag] = 0.0
        r0[diag] = 2.0 * specfun.EULER_GAMMA / np.pi

        speed_s = grid.speed[None, :]
        speed_t = grid.speed[:, None]
        nu = grid.normal * grid.speed[:, None]  # (x2', -x1')
        curv = (nu * grid.d2).sum(-1) / grid.speed**2 * INV_4PI  # nu.x'' / (4 pi |x'|^2)
        tcurv = (grid.d1 * grid.d2).sum(-1) / grid.speed**2 * INV_4PI

        self.diag = diag
        self.r = r
        self.d = d
        self.j0, self.j1, self.r0, self.r1, self.lam = j0, j1, r0, r1, lam
        self.lag = lag

        # single layer: (i/4) H0 |y'|
        self.s1 = -INV_4PI * j0 * speed_s
        self.s2 = speed_s * (0.25j * j0 - 0.25 * r0 - 2.0 * INV_4PI * j0 * lam)

        # common H1 factor (i kappa/4) H1 = log part + rest
        h1_log = -kappa * INV_4PI * j1
        h1_rest = 0.25j * kappa * j1 - 2.0 * kappa * INV_4PI * lam * j1 - 0.25 * kappa * r1

        proj_d = (nu[None, :, :] * d).sum(-1) / r
        proj_d[diag] = 0.0
        self.d1 = h1_log * proj_d
        self.d2 = h1_rest * proj_d
        self.d2[diag] = curv

        proj_n = -(nu[:, None, :] * d).sum(-1) / r * (speed_s / speed_t)
        proj_n[diag] = 0.0
        self.n1 = h1_log * proj_n
        self.n2 = h1_rest * proj_n
        self.n2[diag] = curv

        # tangential: separate the Cauchy part (1/4pi) cot((s-t)/2)
        g = -(grid.d1[:, None, :] * d).sum(-1) / r * (speed_s / speed_t)
        g[diag] = 0.0
        cot = np.zeros_like(lag)
        off = ~diag
        cot[off] = 1.0 / np.tan(-0.5 * lag[off])
        rest = (0.25j * kappa * j1 - 2.0 * kappa * INV_4PI * lam * j1
                - 0.25 * kappa * (r1 + 2.0 / (np.pi * z))) * g
        cauchy_rem = g / (2.0 * np.pi * r) - INV_4PI * cot
        self.t1 = h1_log * g
        self.t2 = rest + cauchy_rem
        self.t2[diag] = tcurv


class OperatorSet:
    """Lazily assembled, cached operator blocks for a set of grids.

    Parameters
    ----------
    grids : sequence of BoundaryGrid
        ``grids[0]`` is the outer curve, ``grids[1]`` the inner one.
    kappas : sequence of float
        Wavenumbers indexed by the kernel index ``k``.
    tangential : {"hilbert", "differentiation"}
        Route for self TS blocks: Cauchy-kernel quadrature, or spectral
        differentiation of the single layer.
    """

    def __init__(self, grids, kappas, tangential="hilbert"):
        if tangential not in ("hilbert", "differentiation"):
            raise ValueError("tangential must be 'hilbert' or 'differentiation'")
        self.grids = list(grids)
        self.kappas = [_check_kappa(k) for k in kappas]
        self.tangential = tangential
        self._self = {}
        self._cross = {}
        self._blocks = {}
        self._rules = {}

    def _rule(self, n):
        if n not in self._rules:
            self._rules[n] = (log_weights(n).matrix, diff_matrix(n).matrix, hilbert_weights(n))
        return self._rules[n]

    def _self_kernels(self, k, l):
        key = (k, l)
        if key not in self._self:
            self._self[key] = _SelfKernels(self.grids[l], self.kappas[k])
        return self._self[key]

    def _cross_data(self, k, l, j):
        key = (k, l, j)
        if key not in self._cross:
            tg, sg = self.grids[l], self.grids[j]
            d = tg.points[:, None, :] - sg.points[None, :, :]
            r = np.hypot(d[..., 0], d[..., 1])
            if np.min(r) == 0.0:
                raise PlacementError(f"curves {l} and {j} share a node")
            h0, h1 = specfun.hankel1_01(self.kappas[k] * r)
            self._cross[key] = (d, r, h0, h1)
        return self._cross[key]

    def block(self, family, k, l, j):
        if family not in FAMILIES:
            raise ValueError(f"unknown operator family {family!r}")
        key = (family, k, l, j)
        if key not in self._blocks:
            mat = self._self_block(family, k, l) if l == j else self._cross_block(family, k, l, j)
            self._blocks[key] = OperatorBlock(family, k, l, j, mat)
        return self._blocks[key]

    def matrix(self, family, k, l, j):
        return self.block(family, k, l, j).matrix

    def _self_block(self, family, k, l):
        grid = self.grids[l]
        n = grid.n
        rw, dm, hw = self._rule(n)
        h = np.pi / n
        if family == "ND":
            return self._maue(k, l)
        if family == "TS" and self.tangential == "differentiation":
            return tangential_from_single(grid, self.matrix("S", k, l, l), dm)
        ker = self._self_kernels(k, l)
        if family == "S":
            return rw * ker.s1 + h * ker.s2
        if family == "D":
            return rw * ker.d1 + h * ker.d2
        if family == "NS":
            return rw * ker.n1 + h * ker.n2
        return 0.5 * hw + rw * ker.t1 + h * ker.t2

    def _maue(self, k, l):
        grid = self.grids[l]
        dm = self._rule(grid.n)[1]
        s = self.matrix("S", k, l, l)
        inv_speed = 1.0 / grid.speed
        deriv = inv_speed[:, None] * dm  # d/dtau on node samples
        n1, n2 = grid.normal[:, 0], grid.normal[:, 1]
        vector_part = n1[:, None] * s * n1[None, :] + n2[:, None] * s * n2[None, :]
        return deriv @ s @ deriv + self.kappas[k] ** 2 * vector_part

    def _cross_block(self, family, k, l, j):
        tg, sg = self.grids[l], self.grids[j]
        kappa = self.kappas[k]
        d, r, h0, h1 = self._cross_data(k, l, j)
        w = sg.weights[None, :]
        if family == "S":
            return 0.25j * h0 * w
        if family == "D":
            proj = (sg.normal[None, :, :] * d).sum(-1) / r
            return 0.25j * kappa * h1 * proj * w
        if family == "NS":
            proj = -(tg.normal[:, None, :] * d).sum(-1) / r
            return 0.25j * kappa * h1 * proj * w
        if family == "TS":
            proj = -(tg.tangent[:, None, :] * d).sum(-1) / r
            return 0.25j * kappa * h1 * proj * w
        nx_d = (tg.normal[:, None, :] * d).sum(-1)
        ny_d = (sg.normal[None, :, :] * d).sum(-1)
        nx_ny = tg.normal @ sg.normal.T
        ker = (kappa * h0 / r - 2.0 * h1 / r**2) * nx_d * ny_d / r + h1 / r * nx_ny
        return 0.25j * kappa * ker * w


def tangential_from_single(grid, single, diff=None):
    """TS block as ``diag(1/|x'|) D S`` (differentiation of the single layer)."""
    dm = diff if diff is not None else diff_matrix(grid.n).matrix
    return (dm @ single) / grid.speed[:, None]


def ns_difference(grid, kappa_a, kappa_b):
    """``NS(kappa_a) - NS(kappa_b)`` on one curve, formed before quadrature.

    The ``1/r`` singularities cancel in the kernel difference; its remaining
    logarithmic part is integrated with the product rule.
    """
    a, b = _SelfKernels(grid, _check_kappa(kappa_a)), _SelfKernels(grid, _check_kappa(kappa_b))
    n = grid.n
    diag = a.diag
    r = a.r
    nu = grid.normal * grid.speed[:, None]
    proj = -(nu[:, None, :] * a.d).sum(-1) / r * (grid.speed[None, :] / grid.speed[:, None])
    proj[diag] = 0.0
    log_coef = -INV_4PI * (kappa_a * a.j1 - kappa_b * b.j1) * proj
    full = np.zeros(log_coef.shape, dtype=complex)
    off = ~diag
    za, zb = kappa_a * r[off], kappa_b * r[off]
    ha = specfun.hankel1_1(za)
    hb = specfun.hankel1_1(zb)
    full[off] = 0.25j * (kappa_a * ha - kappa_b * hb) * proj[off]
    lnsin = np.zeros_like(r)
    lnsin[off] = np.log(4.0 * np.sin(0.5 * a.lag[off]) ** 2)
    smooth = full - log_coef * lnsin
    smooth[diag] = 0.0
    return log_weights(n).matrix * log_coef + (np.pi / n) * smooth


def _blocks_for(family, k, l, j, grids, kappas):
    return OperatorSet(grids, kappas).block(family, k, l, j)


def single_layer(k, l, j, grids, kappas):
    return _blocks_for("S", k, l, j, grids, kappas)


def double_layer(k, l, j, grids, kappas):
    return _blocks_for("D", k, l, j, grids, kappas)


def normal_deriv_single(k, l, j, grids, kappas):
    return _blocks_for("NS", k, l, j, grids, kappas)


def hypersingular(k, l, j, grids, kappas):
    return _blocks_for("ND", k, l, j, grids, kappas)


def tangential_single(k, l, j, grids, kappas, route="hilbert"):
    return OperatorSet(grids, kappas, tangential=route).block("TS", k, l, j)


def potential_eval(family, grid, kappa, density, targets, clearance=None):
    """Single (``"S"``) or double (``"D"``) layer potential at off-curve targets.

    Raises :class:`PlacementError` if a target is within ``clearance``
    (default: one mesh width) of the source curve.
    """
    kappa = _check_kappa(kappa)
    targets = np.asarray(targets, dtype=float).reshape(-1, 2)
    clearance = default_clearance(grid) if clearance is None else clearance
    if len(targets) and np.min(distance_to_polygon(targets, grid.curve.dense())) <= clearance:
        raise PlacementError("potential target lies within the clearance band of the curve")
    density = np.asarray(density, dtype=complex)
    zero = np.zeros_like(density)
    if family == "S":
        a, b = density, zero
    elif family == "D":
        a, b = zero, density
    else:
        raise ValueError("potential family must be 'S' or 'D'")
    return specfun.layer_potentials(targets, grid.points, grid.normal, grid.weights, kappa, a, b)
