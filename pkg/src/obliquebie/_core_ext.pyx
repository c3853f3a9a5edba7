# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: order 0/1 Bessel functions and layer-potential sums.

The Bessel algorithm is identical to ``_core_py`` (series, Miller backward
recurrence, Hankel asymptotics) so both backends agree to rounding.
"""

from libc.math cimport sin, cos, sqrt, log, cbrt, fabs, M_PI

cdef double EULER_GAMMA = 0.57721566490153286061
cdef double SERIES_MAX = 2.0
cdef double ASYMPTOTIC_MIN = 25.0
cdef int SERIES_TERMS = 22
cdef int ASYMPTOTIC_TERMS = 24
cdef int MAX_ORDER = 160
cdef double TINY = 1e-18

cdef double INV_K2[22]
cdef double INV_KK1[22]
cdef double HARM[22]
cdef double PSI_SUM[22]
cdef double INV_P[161]
cdef double ODD_W[161]
cdef double ASYM_C0[25]
cdef double ASYM_C1[25]


cdef void _init_tables():
    cdef int k, p
    cdef double h = 0.0
    INV_K2[0] = 0.0
    INV_KK1[0] = 0.0
    HARM[0] = 0.0
    PSI_SUM[0] = 1.0 - 2.0 * EULER_GAMMA
    for k in range(1, SERIES_TERMS):
        INV_K2[k] = 1.0 / (k * k)
        INV_KK1[k] = 1.0 / (k * (k + 1))
        h += 1.0 / k
        HARM[k] = h
        PSI_SUM[k] = 2.0 * h + 1.0 / (k + 1) - 2.0 * EULER_GAMMA
    INV_P[0] = 0.0
    ODD_W[0] = 0.0
    for k in range(1, MAX_ORDER + 1):
        INV_P[k] = 1.0 / k
        if k % 2 == 1:
            # coefficient of J_k in sum_p (-1)^p (J_{2p-1} - J_{2p+1}) / p
            p = (k + 1) // 2
            if k == 1:
                ODD_W[k] = -1.0
            else:
                ODD_W[k] = (-1.0 if p % 2 else 1.0) * (1.0 / p + 1.0 / (p - 1))
        else:
            ODD_W[k] = 0.0
    for k in range(1, ASYMPTOTIC_TERMS + 1):
        ASYM_C0[k] = (0.0 - (2 * k - 1) * (2 * k - 1)) / (k * 8.0)
        ASYM_C1[k] = (4.0 - (2 * k - 1) * (2 * k - 1)) / (k * 8.0)


_init_tables()


cdef inline int _miller_start(double x) nogil:
    return 2 * <int>((x + 12.0 + 6.0 * cbrt(x)) / 2.0 + 1)


cdef inline void _series(double x, double *out) nogil:
    cdef double q = -0.25 * x * x
    cdef double term0 = 1.0, term1 = 1.0
    cdef double j0 = 1.0, j1s = 1.0, r0s = 0.0
    cdef double r1s = PSI_SUM[0]
    cdef int k
    for k in range(1, SERIES_TERMS):
        term0 = term0 * q * INV_K2[k]
        term1 = term1 * q * INV_KK1[k]
        j0 += term0
        j1s += term1
        r0s -= HARM[k] * term0
        r1s += PSI_SUM[k] * term1
        if fabs(term0) < TINY and fabs(term1) < TINY:
            break
    out[0] = j0
    out[1] = 0.5 * x * j1s
    out[2] = (2.0 / M_PI) * (EULER_GAMMA * j0 + r0s)
    out[3] = -2.0 / (M_PI * x) - (0.5 * x / M_PI) * r1s


cdef inline void _miller(double x, double *out) nogil:
    # m is even; each pass handles one even index k and the odd index k - 1
    cdef int m = _miller_start(x)
    cdef double inv = 2.0 / x
    cdef double jkp1 = 0.0, jk = 1.0, jkm1
    cdef double norm = 0.0, s0 = 0.0, s1 = 0.0
    cdef int k
    for k in range(m, 1, -2):
        norm += 2.0 * jk
        s0 += (-jk if (k >> 1) & 1 else jk) * INV_P[k >> 1]
        jkm1 = k * inv * jk - jkp1
        jkp1 = jk
        jk = jkm1
        s1 += ODD_W[k - 1] * jk
        jkm1 = (k - 1) * inv * jk - jkp1
        jkp1 = jk
        jk = jkm1
    norm += jk
    cdef double rn = 1.0 / norm
    cdef double j0 = jk * rn
    cdef double j1 = jkp1 * rn
    out[0] = j0
    out[1] = j1
    out[2] = (2.0 / M_PI) * (EULER_GAMMA * j0 - 2.0 * s0 * rn)
    out[3] = (2.0 / M_PI) * (EULER_GAMMA * j1 - j0 / x + s1 * rn)


cdef inline void _asymptotic(double x, double *out) nogil:
    cdef double s = sin(x), c = cos(x)
    cdef double rx = 1.0 / x
    cdef double amp = sqrt(2.0 / (M_PI * x))
    cdef double rt2 = 0.70710678118654752440
    cdef double p0 = 1.0, q0 = 0.0, a0 = 1.0
    cdef double p1 = 1.0, q1 = 0.0, a1 = 1.0
    cdef int k
    for k in range(1, ASYMPTOTIC_TERMS + 1):
        a0 = a0 * ASYM_C0[k] * rx
        a1 = a1 * ASYM_C1[k] * rx
        if k % 4 == 1:
            q0 += a0
            q1 += a1
        elif k % 4 == 2:
            p0 -= a0
            p1 -= a1
        elif k % 4 == 3:
            q0 -= a0
            q1 -= a1
        else:
            p0 += a0
            p1 += a1
        if fabs(a0) < TINY and fabs(a1) < TINY:
            break
    cdef double c0 = (c + s) * rt2, s0 = (s - c) * rt2
    cdef double c1 = (s - c) * rt2, s1 = -(s + c) * rt2
    cdef double j0 = amp * (p0 * c0 - q0 * s0)
    cdef double y0 = amp * (p0 * s0 + q0 * c0)
    cdef double j1 = amp * (p1 * c1 - q1 * s1)
    cdef double y1 = amp * (p1 * s1 + q1 * c1)
    cdef double lg = (2.0 / M_PI) * log(0.5 * x)
    out[0] = j0
    out[1] = j1
    out[2] = y0 - lg * j0
    out[3] = y1 - lg * j1


cdef inline void _eval(double x, double *out) nogil:
    if x <= SERIES_MAX:
        _series(x, out)
    elif x <= ASYMPTOTIC_MIN:
        _miller(x, out)
    else:
        _asymptotic(x, out)


def bessel01_into(const double[::1] x, double[::1] j0, double[::1] j1,
                  double[::1] y0, double[::1] y1, double[::1] r0,
                  double[::1] r1):
    """Fill the six output buffers with J0, J1, Y0, Y1 and the regular parts."""
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double out[4]
    cdef double xi, lg
    with nogil:
        for i in range(n):
            xi = x[i]
            _eval(xi, out)
            lg = (2.0 / M_PI) * log(0.5 * xi)
            j0[i] = out[0]
            j1[i] = out[1]
            r0[i] = out[2]
            r1[i] = out[3]
            y0[i] = lg * out[0] + out[2]
            y1[i] = lg * out[1] + out[3]


def layer_potentials(const double[:, ::1] targets, const double[:, ::1] nodes,
                     const double[:, ::1] normals, const double[::1] weights,
                     double kappa, const double complex[::1] single_density,
                     const double complex[::1] double_density):
    """Trapezoid sums of the single- and double-layer potentials at ``targets``.

    Returns ``sum_j w_j [Phi(x, y_j) a_j + dPhi/dn(y_j)(x, y_j) b_j]`` with
    ``Phi = (i/4) H0(kappa |x - y|)``; ``weights`` already include the speed.
    """
    import numpy as np

    cdef Py_ssize_t m = targets.shape[0], n = nodes.shape[0], i, j
    result = np.zeros(m, dtype=complex)
    cdef double complex[::1] res = result
    cdef double out[4]
    cdef double dx, dy, r, z, lg, jj0, jj1, yy0, yy1, proj, wj
    cdef double acc_re, acc_im, ar, ai, br, bi
    with nogil:
        for i in range(m):
            acc_re = 0.0
            acc_im = 0.0
            for j in range(n):
                dx = targets[i, 0] - nodes[j, 0]
                dy = targets[i, 1] - nodes[j, 1]
                r = sqrt(dx * dx + dy * dy)
                z = kappa * r
                _eval(z, out)
                lg = (2.0 / M_PI) * log(0.5 * z)
                jj0 = out[0]
                jj1 = out[1]
                yy0 = lg * jj0 + out[2]
                yy1 = lg * jj1 + out[3]
                # (i/4) H0 a + (i kappa/4) H1 n(y).(x - y)/r b, in real arithmetic
                proj = kappa * (normals[j, 0] * dx + normals[j, 1] * dy) / r
                ar = single_density[j].real
                ai = single_density[j].imag
                br = proj * double_density[j].real
                bi = proj * double_density[j].imag
                wj = 0.25 * weights[j]
                acc_re += wj * (-(jj0 * ai + yy0 * ar) - (jj1 * bi + yy1 * br))
                acc_im += wj * ((jj0 * ar - yy0 * ai) + (jj1 * br - yy1 * bi))
            res[i] = acc_re + 1j * acc_im
    return result
