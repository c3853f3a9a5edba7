"""Real-argument Bessel and Hankel functions of orders 0 and 1.

The heavy lifting is done by a compiled kernel (``_core_ext``) when it is
importable and by the equivalent numpy code in ``_core_py`` otherwise. Both
return, besides ``J0, J1, Y0, Y1``, the regular remainders

    R0(x) = Y0(x) - (2/pi) ln(x/2) J0(x)
    R1(x) = Y1(x) - (2/pi) ln(x/2) J1(x)

which the logarithmic kernel splits in :mod:`obliquebie.operators` need
without cancellation. ``R1`` still carries the ``-2/(pi x)`` pole.
"""

import numpy as np

from . import _core_py
from .errors import DomainError

try:
    from . import _core_ext
except ImportError:  # pragma: no cover - depends on the build
    _core_ext = None

EULER_GAMMA = _core_py.EULER_GAMMA

_backend = "compiled" if _core_ext is not None else "python"


def available_backends():
    return ("compiled", "python") if _core_ext is not None else ("python",)


def get_backend():
    return _backend


def set_backend(name):
    """Select ``"compiled"`` or ``"python"``; returns the previous backend."""
    global _backend
    if name not in available_backends():
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    previous, _backend = _backend, name
    return previous


def _compiled(x):
    flat = np.ascontiguousarray(x, dtype=float).ravel()
    outs = [np.empty_like(flat) for _ in range(6)]
    _core_ext.bessel01_into(flat, *outs)
    return tuple(o.reshape(np.shape(x)) for o in outs)


def _check(x, strict):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("Bessel functions require finite arguments")
    if strict and np.any(x <= 0.0):
        raise DomainError("Y and Hankel functions require x > 0")
    if not strict and np.any(x < 0.0):
        raise DomainError("J functions are evaluated for x >= 0 only")
    return x


def _scalarize(values, like):
    if np.ndim(like) == 0:
        return tuple(v[()] for v in values)
    return values


def bessel01(x):
    """Return ``(J0, J1, Y0, Y1, R0, R1)`` for ``x > 0`` (arrays of ``x``'s shape)."""
    x = _check(x, strict=True)
    if _backend == "compiled":
        out = _compiled(x)
    else:
        out = _core_py.bessel01(x)
    return _scalarize(out, x)


def _bessel_j(x):
    x = _check(x, strict=False)
    safe = np.where(x > 0.0, x, 1.0)
    j0, j1 = bessel01(safe)[:2]
    j0 = np.where(x > 0.0, j0, 1.0)
    j1 = np.where(x > 0.0, j1, 0.0)
    return _scalarize((j0, j1), x)


def bessel_j0(x):
    return _bessel_j(x)[0]


def bessel_j1(x):
    return _bessel_j(x)[1]


def bessel_y0(x):
    return bessel01(x)[2]


def bessel_y1(x):
    return bessel01(x)[3]


def y0_regular(x):
    """``Y0(x) - (2/pi) ln(x/2) J0(x)``, an entire function of ``x**2``."""
    return bessel01(x)[4]


def y1_regular(x):
    """``Y1(x) - (2/pi) ln(x/2) J1(x)``, equal to ``-2/(pi x)`` plus an odd entire part."""
    return bessel01(x)[5]


def hankel1_0(x):
    j0, _, y0, _, _, _ = bessel01(x)
    return j0 + 1j * y0


def hankel1_1(x):
    _, j1, _, y1, _, _ = bessel01(x)
    return j1 + 1j * y1


def hankel1_01(x):
    """Both Hankel functions at once, ``(H0, H1)``."""
    j0, j1, y0, y1, _, _ = bessel01(x)
    return j0 + 1j * y0, j1 + 1j * y1


def layer_potentials(targets, nodes, normals, weights, kappa, single_density, double_density):
    """``sum_j w_j [Phi a_j + dPhi/dn(y_j) b_j]`` at each target (hot kernel).

    ``Phi(x, y) = (i/4) H0(kappa |x - y|)``. Targets must not coincide with
    nodes; callers guarantee a clearance.
    """
    targets = np.ascontiguousarray(targets, dtype=float).reshape(-1, 2)
    nodes = np.ascontiguousarray(nodes, dtype=float)
    normals = np.ascontiguousarray(normals, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=float)
    a = np.ascontiguousarray(single_density, dtype=complex)
    b = np.ascontiguousarray(double_density, dtype=complex)
    if _backend == "compiled":
        return _core_ext.layer_potentials(targets, nodes, normals, weights, float(kappa), a, b)
    return _core_py.layer_potentials(targets, nodes, normals, weights, float(kappa), a, b)
