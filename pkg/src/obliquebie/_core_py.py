"""Vectorised numpy implementation of the order 0/1 Bessel kernel.

This is the fallback used when the compiled extension is not available. It
implements exactly the same three-regime algorithm as ``_core_ext.pyx``:

* ``x <= SERIES_MAX``: ascending power series,
* ``SERIES_MAX < x <= ASYMPTOTIC_MIN``: Miller backward recurrence normalised
  with ``J0 + 2 sum J_2k = 1`` and Neumann series for the Y parts,
* ``x > ASYMPTOTIC_MIN``: Hankel asymptotic expansion.

All routines return the six arrays ``(J0, J1, Y0, Y1, R0, R1)`` where
``R0 = Y0 - (2/pi) ln(x/2) J0`` and ``R1 = Y1 - (2/pi) ln(x/2) J1``.
"""

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061
SERIES_MAX = 2.0
ASYMPTOTIC_MIN = 25.0
SERIES_TERMS = 22
ASYMPTOTIC_TERMS = 24


def miller_start(x):
    """Even starting index for the backward recurrence at argument ``x``."""
    return 2 * int((x + 12.0 + 6.0 * x ** (1.0 / 3.0)) / 2.0 + 1)


def _series(x):
    q = 0.25 * x * x
    h = 0.0
    # term_k = (-q)^k / (k!)^2 ; term1_k = (-q)^k / (k!(k+1)!)
    term0 = np.ones_like(x)
    term1 = np.ones_like(x)
    j0 = term0.copy()
    j1s = term1.copy()
    r0s = np.zeros_like(x)
    psi_sum = np.full_like(x, 1.0 - 2.0 * EULER_GAMMA)  # psi(1) + psi(2)
    r1s = psi_sum * term1
    for k in range(1, SERIES_TERMS):
        term0 = term0 * (-q) / (k * k)
        term1 = term1 * (-q) / (k * (k + 1))
        h += 1.0 / k
        j0 += term0
        j1s += term1
        r0s -= h * term0
        r1s += (2.0 * h + 1.0 / (k + 1) - 2.0 * EULER_GAMMA) * term1
    j1 = 0.5 * x * j1s
    r0 = (2.0 / math.pi) * (EULER_GAMMA * j0 + r0s)
    r1 = -2.0 / (math.pi * x) - (0.5 * x / math.pi) * r1s
    return j0, j1, r0, r1


def _miller(x):
    m = miller_start(float(np.max(x)))
    seq = np.empty((m + 2, x.size))
    seq[m + 1] = 0.0
    seq[m] = 1.0
    inv = 2.0 / x
    for k in range(m, 0, -1):
        seq[k - 1] = k * inv * seq[k] - seq[k + 1]
    half = m // 2
    even = seq[0 : 2 * half + 1 : 2]  # J_0, J_2, ..., J_2half
    norm = even[0] + 2.0 * even[1:].sum(axis=0)
    kk = np.arange(1, half + 1, dtype=float)
    sign = np.where(kk % 2 == 0, 1.0, -1.0)
    s0 = (sign / kk) @ even[1:]
    odd_diff = seq[1 : 2 * half : 2] - seq[3 : 2 * half + 2 : 2]  # J_2k-1 - J_2k+1
    s1 = (sign / kk) @ odd_diff
    j0 = seq[0] / norm
    j1 = seq[1] / norm
    r0 = (2.0 / math.pi) * (EULER_GAMMA * j0 - 2.0 * s0 / norm)
    r1 = (2.0 / math.pi) * (EULER_GAMMA * j1 - j0 / x + s1 / norm)
    return j0, j1, r0, r1


def _asymptotic(x):
    out = []
    s, c = np.sin(x), np.cos(x)
    amp = np.sqrt(2.0 / (math.pi * x))
    for nu in (0, 1):
        mu = 4.0 * nu * nu
        p = np.ones_like(x)
        qq = np.zeros_like(x)
        a = np.ones_like(x)
        for k in range(1, ASYMPTOTIC_TERMS + 1):
            a = a * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
            if k % 4 == 1:
                qq += a
            elif k % 4 == 2:
                p -= a
            elif k % 4 == 3:
                qq -= a
            else:
                p += a
        if nu == 0:
            cchi, schi = (c + s) / math.sqrt(2.0), (s - c) / math.sqrt(2.0)
        else:
            cchi, schi = (s - c) / math.sqrt(2.0), -(s + c) / math.sqrt(2.0)
        out.append(amp * (p * cchi - qq * schi))
        out.append(amp * (p * schi + qq * cchi))
    j0, y0, j1, y1 = out
    lg = (2.0 / math.pi) * np.log(0.5 * x)
    return j0, j1, y0 - lg * j0, y1 - lg * j1


def bessel01(x):
    """Evaluate ``(J0, J1, Y0, Y1, R0, R1)`` at positive ``x`` (any shape)."""
    x = np.asarray(x, dtype=float)
    shape = x.shape
    xf = x.ravel()
    res = [np.empty_like(xf) for _ in range(4)]
    regimes = (
        (xf <= SERIES_MAX, _series),
        ((xf > SERIES_MAX) & (xf <= ASYMPTOTIC_MIN), _miller),
        (xf > ASYMPTOTIC_MIN, _asymptotic),
    )
    for mask, func in regimes:
        if mask.any():
            vals = func(xf[mask])
            for r, v in zip(res, vals):
                r[mask] = v
    j0, j1, r0, r1 = res
    with np.errstate(divide="ignore"):
        lg = (2.0 / math.pi) * np.log(0.5 * xf)
    y0 = lg * j0 + r0
    y1 = lg * j1 + r1
    return tuple(a.reshape(shape) for a in (j0, j1, y0, y1, r0, r1))


def layer_potentials(targets, nodes, normals, weights, kappa, single_density, double_density,
                     chunk=4096):
    """Trapezoid sums of single- and double-layer potentials at ``targets``.

    Same contract as the compiled ``layer_potentials``: returns
    ``sum_j w_j [Phi(x, y_j) a_j + dPhi/dn(y_j)(x, y_j) b_j]`` with
    ``Phi = (i/4) H0(kappa |x - y|)``.
    """
    targets = np.asarray(targets, dtype=float)
    out = np.empty(len(targets), dtype=complex)
    a = np.asarray(single_density, dtype=complex) * weights
    b = np.asarray(double_density, dtype=complex) * weights
    for start in range(0, len(targets), chunk):
        tx = targets[start : start + chunk]
        d = tx[:, None, :] - nodes[None, :, :]
        r = np.hypot(d[..., 0], d[..., 1])
        j0, j1, y0, y1, _, _ = bessel01(kappa * r)
        proj = (d[..., 0] * normals[:, 0] + d[..., 1] * normals[:, 1]) / r
        out[start : start + chunk] = 0.25j * (
            (j0 + 1j * y0) @ a + kappa * ((j1 + 1j * y1) * proj) @ b
        )
    return out
