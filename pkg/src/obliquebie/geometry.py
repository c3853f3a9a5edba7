"""Parametrised 2pi-periodic boundary curves, node grids and region labels.

All curves are parametrised counterclockwise. The unit normal is
``n = (x2', -x1') / |x'|`` and the tangent ``tau = (-n2, n1) = x' / |x'|``, so
the normal on the outer curve points into the exterior and the normal on the
inner curve points out of the hole, into the annulus.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.spatial import cKDTree

from .errors import GeometryError

EXTERIOR, ANNULUS, HOLE, NEAR_BOUNDARY = 0, 1, 2, 3
REGION_NAMES = {EXTERIOR: "exterior", ANNULUS: "annulus", HOLE: "hole", NEAR_BOUNDARY: "near-boundary"}

_DENSE_SAMPLES = 2048


@dataclass(frozen=True)
class Curve:
    """A closed C2 curve ``t -> x(t)`` with analytic first and second derivatives.

    ``kind`` and ``params`` only describe the curve (for manifests and
    equality); evaluation goes through the three callables, each mapping an
    array of parameters of shape ``s`` to points of shape ``s + (2,)``.
    """

    kind: str
    params: dict
    position_fn: Callable = field(repr=False, compare=False)
    derivative_fn: Callable = field(repr=False, compare=False)
    second_derivative_fn: Callable = field(repr=False, compare=False)

    def position(self, t):
        return self.position_fn(np.asarray(t, dtype=float))

    def derivative(self, t):
        return self.derivative_fn(np.asarray(t, dtype=float))

    def second_derivative(self, t):
        return self.second_derivative_fn(np.asarray(t, dtype=float))

    def describe(self):
        return {"kind": self.kind, **self.params}

    def dense(self, samples=_DENSE_SAMPLES):
        """Closed polygon approximation (first vertex not repeated)."""
        return self.position(np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False))


def _stack(a, b):
    return np.stack(np.broadcast_arrays(a, b), axis=-1)


def _validate(curve):
    t = np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False)
    speed = np.linalg.norm(curve.derivative(t), axis=-1)
    pts = curve.position(t)
    if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(speed))):
        raise GeometryError(f"{curve.kind} curve produces non-finite points")
    if np.min(speed) <= 0.0:
        raise GeometryError(f"{curve.kind} curve has a vanishing tangent")
    # counterclockwise orientation: positive signed area
    d = curve.derivative(t)
    area = 0.5 * np.mean(pts[:, 0] * d[:, 1] - pts[:, 1] * d[:, 0]) * 2.0 * np.pi
    if area <= 0.0:
        raise GeometryError(f"{curve.kind} curve is not counterclockwise")
    return curve


def make_circle(center=(0.0, 0.0), radius=1.0):
    if radius <= 0.0:
        raise GeometryError("circle radius must be positive")
    cx, cy = map(float, center)
    r = float(radius)
    return _validate(
        Curve(
            "circle",
            {"center": [cx, cy], "radius": r},
            lambda t: _stack(cx + r * np.cos(t), cy + r * np.sin(t)),
            lambda t: _stack(-r * np.sin(t), r * np.cos(t)),
            lambda t: _stack(-r * np.cos(t), -r * np.sin(t)),
        )
    )


def make_kite(radius=0.2, bend=0.1, offset=(-0.2, 0.1)):
    """Kite ``(radius cos t + bend cos 2t, radius sin t) + offset``.

    The defaults are the kite ``(0.2 cos t + 0.1 cos 2t - 0.2, 0.2 sin t + 0.1)``.
    """
    a, b = float(radius), float(bend)
    ox, oy = map(float, offset)
    return _validate(
        Curve(
            "kite",
            {"radius": a, "bend": b, "offset": [ox, oy]},
            lambda t: _stack(a * np.cos(t) + b * np.cos(2 * t) + ox, a * np.sin(t) + oy),
            lambda t: _stack(-a * np.sin(t) - 2 * b * np.sin(2 * t), a * np.cos(t)),
            lambda t: _stack(-a * np.cos(t) - 4 * b * np.cos(2 * t), -a * np.sin(t)),
        )
    )


@dataclass(frozen=True)
class RadialRule:
    """Radial function ``r(t)`` with its first two derivatives."""

    name: str
    params: dict
    r: Callable = field(repr=False, compare=False)
    dr: Callable = field(repr=False, compare=False)
    d2r: Callable = field(repr=False, compare=False)


def constant_radius(radius):
    radius = float(radius)
    return RadialRule(
        "constant",
        {"radius": radius},
        lambda t: np.full(np.shape(t), radius),
        lambda t: np.zeros(np.shape(t)),
        lambda t: np.zeros(np.shape(t)),
    )


def peanut(a=0.5, b=0.1):
    """``r(t) = sqrt(a cos^2 t + b sin^2 t)``."""
    a, b = float(a), float(b)

    def r(t):
        return np.sqrt(a * np.cos(t) ** 2 + b * np.sin(t) ** 2)

    def dr(t):
        return 0.5 * (b - a) * np.sin(2 * t) / r(t)

    def d2r(t):
        return ((b - a) * np.cos(2 * t) - dr(t) ** 2) / r(t)

    return RadialRule("peanut", {"a": a, "b": b}, r, dr, d2r)


def apple(c0=0.45, c1=0.3, c2=-0.1, d=0.7):
    """``r(t) = (c0 + c1 cos t + c2 sin 2t) / (1 + d cos t)``."""
    c0, c1, c2, d = map(float, (c0, c1, c2, d))

    def parts(t):
        num = c0 + c1 * np.cos(t) + c2 * np.sin(2 * t)
        dnum = -c1 * np.sin(t) + 2 * c2 * np.cos(2 * t)
        d2num = -c1 * np.cos(t) - 4 * c2 * np.sin(2 * t)
        den = 1.0 + d * np.cos(t)
        dden = -d * np.sin(t)
        d2den = -d * np.cos(t)
        return num, dnum, d2num, den, dden, d2den

    def r(t):
        num, _, _, den, _, _ = parts(t)
        return num / den

    def dr(t):
        num, dnum, _, den, dden, _ = parts(t)
        return (dnum * den - num * dden) / den**2

    def d2r(t):
        num, dnum, d2num, den, dden, d2den = parts(t)
        rr = num / den
        rp = (dnum * den - num * dden) / den**2
        return (d2num - 2 * rp * dden - rr * d2den) / den

    return RadialRule("apple", {"c0": c0, "c1": c1, "c2": c2, "d": d}, r, dr, d2r)


def spectral_radial(r_func, modes=64, name="spectral"):
    """Radial rule from an arbitrary periodic ``r_func`` via a trigonometric fit.

    Derivatives come from differentiating the fitted Fourier series, which is
    spectrally accurate for analytic ``r_func``.
    """
    samples = 4 * modes
    t = 2 * np.pi * np.arange(samples) / samples
    coef = np.fft.rfft(r_func(t)) / samples
    coef = coef[: modes + 1]
    k = np.arange(modes + 1)

    def series(tt, order):
        tt = np.asarray(tt, dtype=float)
        phase = np.exp(1j * np.multiply.outer(tt, k))
        c = coef * (1j * k) ** order
        vals = 2.0 * (phase * c).sum(axis=-1).real - c[0].real
        return vals

    return RadialRule(
        name, {"modes": modes}, lambda t: series(t, 0), lambda t: series(t, 1), lambda t: series(t, 2)
    )


def make_radial(rule, offset=(0.0, 0.0)):
    """Star-shaped curve ``r(t) (cos t, sin t) + offset``."""
    ox, oy = map(float, offset)
    probe = rule.r(np.linspace(0.0, 2.0 * np.pi, 1024, endpoint=False))
    if np.min(probe) <= 0.0:
        raise GeometryError(f"radial rule {rule.name!r} has a nonpositive radius")

    def pos(t):
        r = rule.r(t)
        return _stack(r * np.cos(t) + ox, r * np.sin(t) + oy)

    def d1(t):
        r, rp = rule.r(t), rule.dr(t)
        c, s = np.cos(t), np.sin(t)
        return _stack(rp * c - r * s, rp * s + r * c)

    def d2(t):
        r, rp, rpp = rule.r(t), rule.dr(t), rule.d2r(t)
        c, s = np.cos(t), np.sin(t)
        return _stack(rpp * c - 2 * rp * s - r * c, rpp * s + 2 * rp * c - r * s)

    params = {"rule": rule.name, **rule.params, "offset": [ox, oy]}
    return _validate(Curve("radial", params, pos, d1, d2))


@dataclass(frozen=True)
class Frame:
    position: np.ndarray
    speed: np.ndarray
    normal: np.ndarray
    tangent: np.ndarray
    second_derivative: np.ndarray


def frame(curve, t):
    """Position, speed, unit normal, unit tangent and ``x''`` at ``t``."""
    d1 = curve.derivative(t)
    speed = np.linalg.norm(d1, axis=-1)
    normal = np.stack([d1[..., 1], -d1[..., 0]], axis=-1) / speed[..., None]
    tangent = np.stack([-normal[..., 1], normal[..., 0]], axis=-1)
    return Frame(curve.position(t), speed, normal, tangent, curve.second_derivative(t))


@dataclass(frozen=True, eq=False)
class BoundaryGrid:
    """Equispaced nodes ``t_k = k pi / n``, ``k = 0..2n-1``, on one curve."""

    curve: Curve
    n: int
    t: np.ndarray
    points: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    speed: np.ndarray
    normal: np.ndarray
    tangent: np.ndarray

    @property
    def size(self):
        return 2 * self.n

    @property
    def weights(self):
        """Trapezoid weights including the speed, ``(pi/n) |x'(t_k)|``."""
        return (np.pi / self.n) * self.speed

    def mesh_width(self):
        return 2.0 * np.pi * float(np.max(self.speed)) / self.n


def make_grid(curve, n):
    if int(n) != n or n < 2:
        raise ValueError("node half-count n must be an integer >= 2")
    n = int(n)
    t = np.pi * np.arange(2 * n) / n
    fr = frame(curve, t)
    return BoundaryGrid(curve, n, t, fr.position, curve.derivative(t), fr.second_derivative,
                        fr.speed, fr.normal, fr.tangent)


def winding_number(points, polygon):
    """Signed winding number of the closed ``polygon`` around each point.

    Counts signed crossings of the rightward horizontal ray from each point.
    Points are sorted by ``y`` so each edge only meets the points in its
    ``[ymin, ymax)`` band.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    a = np.asarray(polygon, dtype=float)
    b = np.roll(a, -1, axis=0)
    order = np.argsort(points[:, 1], kind="stable")
    ys = points[order, 1]
    lo = np.searchsorted(ys, np.minimum(a[:, 1], b[:, 1]), side="left")
    hi = np.searchsorted(ys, np.maximum(a[:, 1], b[:, 1]), side="left")
    counts = hi - lo
    edge = np.repeat(np.arange(len(a)), counts)
    start = np.repeat(lo - np.concatenate([[0], np.cumsum(counts)[:-1]]), counts)
    pid = order[start + np.arange(counts.sum())]
    ax, ay, bx, by = a[edge, 0], a[edge, 1], b[edge, 0], b[edge, 1]
    px, py = points[pid, 0], points[pid, 1]
    x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
    sign = np.where(by > ay, 1, -1)
    hit = x_cross > px
    return np.bincount(pid[hit], weights=sign[hit], minlength=len(points)).astype(int)


def distance_to_polygon(points, polygon, candidates=8):
    """Distance from each point to the closed polygon (edges included).

    Only the edges adjacent to the ``candidates`` nearest vertices are tested,
    which is exact for the finely sampled polygons produced by ``Curve.dense``.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    a = np.asarray(polygon, dtype=float)
    nv = len(a)
    k = min(candidates, nv)
    _, idx = cKDTree(a).query(points, k=k)
    idx = idx.reshape(len(points), k)
    seg_start = np.concatenate([idx, (idx - 1) % nv], axis=1)
    p0 = a[seg_start]
    seg = a[(seg_start + 1) % nv] - p0
    w = points[:, None, :] - p0
    lam = np.clip((w * seg).sum(-1) / (seg * seg).sum(-1), 0.0, 1.0)
    d = w - lam[..., None] * seg
    return np.sqrt((d * d).sum(-1)).min(-1)


def check_nested(outer, inner):
    """Raise :class:`GeometryError` unless ``inner`` lies strictly inside ``outer``."""
    po, pi_ = outer.dense(), inner.dense()
    if np.any(winding_number(pi_, po) != 1):
        raise GeometryError("inner curve is not contained in the outer curve")
    if np.any(winding_number(po, pi_) != 0):
        raise GeometryError("outer curve enters the inner curve")


def classify(points, outer, inner, clearance):
    """Region label per point: EXTERIOR, ANNULUS, HOLE or NEAR_BOUNDARY.

    Points closer than ``clearance`` to either curve are NEAR_BOUNDARY. The
    labels are computed from dense polygons of the curves, independently of
    any node grid.
    """
    check_nested(outer, inner)
    pts = np.asarray(points, dtype=float)
    shape = pts.shape[:-1]
    pts = pts.reshape(-1, 2)
    po, pi_ = outer.dense(), inner.dense()
    w_outer = winding_number(pts, po)
    w_inner = winding_number(pts, pi_)
    labels = np.where(w_outer == 0, EXTERIOR, np.where(w_inner == 0, ANNULUS, HOLE))
    near = (distance_to_polygon(pts, po) < clearance) | (distance_to_polygon(pts, pi_) < clearance)
    labels = np.where(near, NEAR_BOUNDARY, labels)
    return labels.reshape(shape)


def default_clearance(*grids):
    """One mesh width ``2 pi max|x'| / n``, maximised over the given grids."""
    return max(g.mesh_width() for g in grids)
