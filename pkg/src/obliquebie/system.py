"""Scene parameters, block assembly of ``(I + K) phi = g`` and the dense solve.

Unknown ordering is ``(phi0e, psi1h, phi0h, psi1e, psi2h, psi2e)``; the first
four blocks are sampled on the outer curve, the last two on the inner one.
"""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .errors import InfeasibleAngleError, IrregularWavenumberError, ParameterError
from .geometry import Curve, check_nested, make_grid
from .operators import OperatorSet
from .quadrature import diff_matrix

E_BLOCKS = (0, 3, 5)  # phi0e, psi1e, psi2e
H_BLOCKS = (1, 2, 4)  # psi1h, phi0h, psi2h
RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class Impedance:
    """Impedance on the inner curve: a constant, or ``1 / (a + b cos t)``."""

    kind: str = "constant"
    value: float = 1.0
    a: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "reciprocal_cosine"):
            raise ParameterError(f"unknown impedance rule {self.kind!r}")
        if self.kind == "constant" and not (np.isfinite(self.value) and self.value > 0):
            raise ParameterError("impedance must be positive")
        if self.kind == "reciprocal_cosine" and not abs(self.b) < self.a:
            raise ParameterError("1/(a + b cos t) needs |b| < a to stay positive")

    @classmethod
    def constant(cls, value):
        return cls("constant", value=float(value))

    @classmethod
    def reciprocal_cosine(cls, a, b):
        return cls("reciprocal_cosine", a=float(a), b=float(b))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            return np.full(t.shape, self.value)
        return 1.0 / (self.a + self.b * np.cos(t))

    def describe(self):
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value}
        return {"kind": "reciprocal_cosine", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class ScatteringScene:
    omega: float
    theta: float
    phi_inc: float
    eps0: float
    mu0: float
    eps1: float
    mu1: float
    impedance: Impedance
    outer: Curve
    inner: Curve
    n0: int = 32
    n1: int = 32

    def __post_init__(self):
        for name in ("omega", "eps0", "mu0", "eps1", "mu1"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be positive, got {v}")
        if not 0.0 < self.theta < np.pi:
            raise ParameterError("theta must lie in (0, pi)")
        if not np.isfinite(self.phi_inc):
            raise ParameterError("phi_inc must be finite")
        for name in ("n0", "n1"):
            if int(getattr(self, name)) < 2:
                raise ParameterError(f"{name} must be at least 2")
        check_nested(self.outer, self.inner)

    def with_n(self, n0, n1=None):
        return replace(self, n0=int(n0), n1=int(n0 if n1 is None else n1))

    def grids(self):
        return make_grid(self.outer, self.n0), make_grid(self.inner, self.n1)


@dataclass(frozen=True)
class DerivedParams:
    omega: float
    k0: float
    beta: float
    kappa0: float
    kappa1: float
    mu_t0: float
    mu_t1: float
    eps_t0: float
    eps_t1: float
    beta0: float
    beta1: float
    eps0: float
    theta: float

    def as_dict(self):
        return {"k0": self.k0, "beta": self.beta, "kappa0": self.kappa0, "kappa1": self.kappa1}


def derive_params(scene):
    """Wavenumbers and scaled material constants of a scene."""
    k0 = scene.omega * np.sqrt(scene.mu0 * scene.eps0)
    beta = k0 * np.cos(scene.theta)
    if abs(beta) < 1e-15 * k0:
        beta = 0.0
    kappa0 = k0 * np.sin(scene.theta)
    kappa1_sq = scene.mu1 * scene.eps1 * scene.omega**2 - beta**2
    if kappa1_sq <= 0.0:
        raise InfeasibleAngleError(
            "infeasible incidence angle: mu1 eps1 must exceed mu0 eps0 cos^2(theta)")
    kappa1 = np.sqrt(kappa1_sq)
    return DerivedParams(
        omega=scene.omega, k0=k0, beta=beta, kappa0=kappa0, kappa1=kappa1,
        mu_t0=scene.mu0 / kappa0**2, mu_t1=scene.mu1 / kappa1**2,
        eps_t0=scene.eps0 / kappa0**2, eps_t1=scene.eps1 / kappa1**2,
        beta0=beta / kappa0**2, beta1=beta / kappa1**2,
        eps0=scene.eps0, theta=scene.theta,
    )


@dataclass(eq=False)
class BlockSystem:
    """Assembled ``A = I + K`` with its block layout."""

    matrix: np.ndarray
    sizes: tuple
    rhs: np.ndarray = None
    K: dict = field(default_factory=dict)

    @property
    def offsets(self):
        return np.concatenate([[0], np.cumsum(self.sizes)])

    def block(self, row, col):
        """Block ``K_{row,col}`` (1-based), zeros if structurally absent."""
        o = self.offsets
        sl = self.matrix[o[row - 1]:o[row], o[col - 1]:o[col]].copy()
        if row == col:
            sl -= np.eye(sl.shape[0])
        return sl

    def with_rhs(self, rhs):
        rhs = np.asarray(rhs, dtype=complex)
        if rhs.shape != (self.matrix.shape[0],):
            raise ValueError("rhs length does not match the system")
        return BlockSystem(self.matrix, self.sizes, rhs, self.K)


def assemble_K(params, grids, impedance, tangential="hilbert", operators=None):
    """Assemble the system matrix ``I + K``.

    Parameters
    ----------
    params : DerivedParams
    grids : (BoundaryGrid, BoundaryGrid)
        Outer and inner grids.
    impedance : Impedance
        Evaluated node-wise on the inner grid.
    tangential : {"hilbert", "differentiation"}
        Route for self TS blocks.
    operators : OperatorSet, optional
        Reuse precomputed blocks; must match ``grids`` and the wavenumbers.
    """
    g0, g1 = grids
    lam = impedance(g1.t)
    if np.any(~np.isfinite(lam)) or np.any(lam <= 0.0):
        raise ParameterError("impedance must be positive at every node")
    ops = operators or OperatorSet([g0, g1], [params.kappa0, params.kappa1], tangential)
    M = ops.matrix
    w = params.omega
    mt0, mt1, et0, et1 = params.mu_t0, params.mu_t1, params.eps_t0, params.eps_t1
    b0, b1 = params.beta0, params.beta1

    K = {}
    K[1, 1] = 2.0 * M("D", 0, 0, 0)
    K[1, 4] = -2.0 * (M("S", 1, 0, 0) - (et1 / et0) * M("S", 0, 0, 0))
    K[1, 6] = -2.0 * M("S", 1, 0, 1)

    ns_diff = M("NS", 1, 0, 0) - M("NS", 0, 0, 0)
    ts100, ts101 = M("TS", 1, 0, 0), M("TS", 1, 0, 1)
    K[2, 2] = ns_diff
    K[2, 3] = -(mt0 / mt1) * M("ND", 0, 0, 0)
    K[2, 4] = ((b1 - b0) / (mt1 * w)) * ts100
    K[2, 5] = M("NS", 1, 0, 1)
    K[2, 6] = ((b1 - b0) / (mt1 * w)) * ts101

    K[3, 2] = -2.0 * (M("S", 1, 0, 0) - (mt1 / mt0) * M("S", 0, 0, 0))
    K[3, 3] = 2.0 * M("D", 0, 0, 0)
    K[3, 5] = -2.0 * M("S", 1, 0, 1)

    K[4, 1] = -(et0 / et1) * M("ND", 0, 0, 0)
    K[4, 2] = ((b0 - b1) / (et1 * w)) * ts100
    K[4, 4] = K[2, 2]
    K[4, 5] = ((b0 - b1) / (et1 * w)) * ts101
    K[4, 6] = K[2, 5]

    lam_col = lam[:, None]
    s110, s111 = M("S", 1, 1, 0), M("S", 1, 1, 1)
    ns110, ns111 = M("NS", 1, 1, 0), M("NS", 1, 1, 1)
    ts110, ts111 = M("TS", 1, 1, 0), M("TS", 1, 1, 1)
    c5 = -2.0 / (mt1 * w)
    K[5, 2] = c5 * (mt1 * w * ns110 + 1j * lam_col * s110)
    K[5, 4] = c5 * b1 * ts110
    K[5, 5] = c5 * (mt1 * w * ns111 + 1j * lam_col * s111)
    K[5, 6] = c5 * b1 * ts111

    c6 = -2.0 / (lam_col * et1 * w)
    K[6, 2] = c6 * (-lam_col * b1 * ts110)
    K[6, 4] = c6 * (lam_col * et1 * w * ns110 + 1j * s110)
    K[6, 5] = c6 * (-lam_col * b1 * ts111)
    K[6, 6] = c6 * (lam_col * et1 * w * ns111 + 1j * s111)

    sizes = (g0.size,) * 4 + (g1.size,) * 2
    offs = np.concatenate([[0], np.cumsum(sizes)])
    A = np.eye(offs[-1], dtype=complex)
    for (r, c), blk in K.items():
        A[offs[r - 1]:offs[r], offs[c - 1]:offs[c]] += blk
    return BlockSystem(A, sizes, None, K)


def _incident(params, points, phi_inc):
    direction = np.array([np.cos(phi_inc), np.sin(phi_inc)])
    amp = np.sin(params.theta) / np.sqrt(params.eps0)
    return amp * np.exp(1j * params.kappa0 * (points @ direction)), direction


def incident_field(params, points, phi_inc):
    """Plane wave ``e_inc`` at ``points`` (shape ``(..., 2)``)."""
    return _incident(params, np.asarray(points, dtype=float), phi_inc)[0]


def rhs_incident(params, grids, phi_inc):
    g0, g1 = grids
    e_inc, direction = _incident(params, g0.points, phi_inc)
    dn = 1j * params.kappa0 * (g0.normal @ direction) * e_inc
    zero0 = np.zeros(g0.size, dtype=complex)
    zero1 = np.zeros(g1.size, dtype=complex)
    return np.concatenate([
        -2.0 * e_inc, zero0, zero0, (params.eps_t0 / params.eps_t1) * dn, zero1, zero1,
    ])


def rhs_manufactured(params, grids, impedance, sources):
    """Right-hand side for the point-source scene with known solution."""
    from .fields import manufactured_data

    g0, g1 = grids
    f = manufactured_data(params, grids, impedance, sources)
    dm = diff_matrix(g0.n).matrix
    dtau = lambda v: (dm @ v) / g0.speed  # noqa: E731
    w = params.omega
    lam = impedance(g1.t)
    return np.concatenate([
        -2.0 * f[0],
        -(params.beta0 / (params.mu_t1 * w)) * dtau(f[0]) + f[1] / (params.mu_t1 * w),
        -2.0 * f[2],
        (params.beta0 / (params.eps_t1 * w)) * dtau(f[2]) + f[3] / (params.eps_t1 * w),
        -2.0 * f[4] / (params.mu_t1 * w),
        -2.0 * f[5] / (lam * params.eps_t1 * w),
    ])


@dataclass(frozen=True, eq=False)
class Densities:
    phi0e: np.ndarray
    psi1h: np.ndarray
    phi0h: np.ndarray
    psi1e: np.ndarray
    psi2h: np.ndarray
    psi2e: np.ndarray
    psi0e: np.ndarray
    psi0h: np.ndarray
    residual: float = 0.0

    @classmethod
    def from_vector(cls, vec, sizes, params, residual=0.0):
        offs = np.concatenate([[0], np.cumsum(sizes)])
        parts = [vec[offs[i]:offs[i + 1]] for i in range(6)]
        psi0e = -(params.eps_t1 / params.eps_t0) * parts[3]
        psi0h = -(params.mu_t1 / params.mu_t0) * parts[1]
        return cls(*parts, psi0e, psi0h, residual)

    def vector(self):
        return np.concatenate([self.phi0e, self.psi1h, self.phi0h,
                               self.psi1e, self.psi2h, self.psi2e])


def _lu_solve(A, b):
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
        try:
            lu = scipy.linalg.lu_factor(A, check_finite=True)
            x = scipy.linalg.lu_solve(lu, b)
        except (scipy.linalg.LinAlgWarning, scipy.linalg.LinAlgError, ValueError) as exc:
            raise IrregularWavenumberError(
                "system matrix is numerically singular; the wavenumber may be an "
                "interior Dirichlet eigenvalue of the hole or the annulus") from exc
    return x


def solve(system, params):
    """Solve the assembled system and recover the eliminated densities."""
    if system.rhs is None:
        raise ValueError("system has no right-hand side")
    A, b = system.matrix, system.rhs
    x = _lu_solve(A, b)
    scale = np.max(np.abs(b))
    residual = np.max(np.abs(A @ x - b)) / scale if scale > 0 else np.max(np.abs(A @ x))
    if not np.all(np.isfinite(x)) or residual > RESIDUAL_TOL:
        raise IrregularWavenumberError(
            f"solve residual {residual:.2e} exceeds {RESIDUAL_TOL:g}; the system is "
            "ill-conditioned near an irregular wavenumber")
    return Densities.from_vector(x, system.sizes, params, residual)


def split_solve(system, params):
    """Solve the e- and h-subsystems separately (valid only when they decouple)."""
    offs = system.offsets
    x = np.zeros(system.matrix.shape[0], dtype=complex)
    for blocks in (E_BLOCKS, H_BLOCKS):
        idx = np.concatenate([np.arange(offs[i], offs[i + 1]) for i in blocks])
        rest = np.setdiff1d(np.arange(len(x)), idx)
        if np.any(system.matrix[np.ix_(idx, rest)] != 0):
            raise ValueError("the system does not decouple")
        x[idx] = _lu_solve(system.matrix[np.ix_(idx, idx)], system.rhs[idx])
    return Densities.from_vector(x, system.sizes, params)
