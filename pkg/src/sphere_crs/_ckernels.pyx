# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: rotation-chain scans for the inverse kinematics and the
fixed-step integrator of dR/dt = R Omega. Same API as _pykernels."""

import numpy as np
from libc.math cimport sin, cos, ceil, fabs


cdef inline void _rotate(const double* k, double c, double s, double* v) noexcept nogil:
    # v <- Rot(k, angle) v  with c = cos(angle), s = sin(angle)
    cdef double cx = k[1] * v[2] - k[2] * v[1]
    cdef double cy = k[2] * v[0] - k[0] * v[2]
    cdef double cz = k[0] * v[1] - k[1] * v[0]
    cdef double d = (k[0] * v[0] + k[1] * v[1] + k[2] * v[2]) * (1.0 - c)
    v[0] = v[0] * c + cx * s + k[0] * d
    v[1] = v[1] * c + cy * s + k[1] * d
    v[2] = v[2] * c + cz * s + k[2] * d


cdef double _chain_one(const double[:, ::1] axes, const double[::1] cf, const double[::1] sf,
                       const unsigned char[::1] var, const double[::1] x, const double[::1] y,
                       double ct, double st) noexcept nogil:
    cdef double v[3]
    cdef double k[3]
    cdef Py_ssize_t j, m = axes.shape[0]
    v[0] = y[0]; v[1] = y[1]; v[2] = y[2]
    for j in range(m - 1, -1, -1):
        k[0] = axes[j, 0]; k[1] = axes[j, 1]; k[2] = axes[j, 2]
        if var[j]:
            _rotate(k, ct, st, v)
        else:
            _rotate(k, cf[j], sf[j], v)
    return x[0] * v[0] + x[1] * v[1] + x[2] * v[2]


def chain_eval(const double[:, ::1] axes, const double[::1] angles,
               const unsigned char[::1] var, const double[::1] x,
               const double[::1] y, const double[::1] thetas):
    """x^T Rot(a_1, t_1) ... Rot(a_m, t_m) y for every theta, where t_j is
    angles[j] for fixed positions and theta where var[j] is set."""
    cdef Py_ssize_t m = axes.shape[0], n = thetas.shape[0], i, j
    cf_arr = np.empty(m)
    sf_arr = np.empty(m)
    cdef double[::1] cf = cf_arr
    cdef double[::1] sf = sf_arr
    for j in range(m):
        cf[j] = cos(angles[j])
        sf[j] = sin(angles[j])
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    with nogil:
        for i in range(n):
            out[i] = _chain_one(axes, cf, sf, var, x, y, cos(thetas[i]), sin(thetas[i]))
    return out_arr


def chain_bisect(const double[:, ::1] axes, const double[::1] angles,
                 const unsigned char[::1] var, const double[::1] x,
                 const double[::1] y, double c0, double lo, double hi, double xtol):
    """Bisection for chain(theta) = c0 on [lo, hi]; assumes a sign change."""
    cdef Py_ssize_t m = axes.shape[0], j
    cf_arr = np.empty(m)
    sf_arr = np.empty(m)
    cdef double[::1] cf = cf_arr
    cdef double[::1] sf = sf_arr
    for j in range(m):
        cf[j] = cos(angles[j])
        sf[j] = sin(angles[j])
    cdef double flo, fmid, mid
    with nogil:
        flo = _chain_one(axes, cf, sf, var, x, y, cos(lo), sin(lo)) - c0
        while hi - lo > xtol:
            mid = 0.5 * (lo + hi)
            fmid = _chain_one(axes, cf, sf, var, x, y, cos(mid), sin(mid)) - c0
            if fmid == 0.0:
                lo = mid
                hi = mid
                break
            if (fmid < 0.0) == (flo < 0.0):
                lo = mid
                flo = fmid
            else:
                hi = mid
    return 0.5 * (lo + hi)


cdef inline void _matmul(const double* a, const double* b, double* out) noexcept nogil:
    cdef int i, j
    for i in range(3):
        for j in range(3):
            out[3 * i + j] = a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j]


cdef inline void _polar_step(double* x) noexcept nogil:
    # x <- (x + x^{-T}) / 2 ; x^{-T} = cofactor(x) / det(x)
    cdef double c[9]
    cdef double det
    cdef int i
    c[0] = x[4] * x[8] - x[5] * x[7]
    c[1] = x[5] * x[6] - x[3] * x[8]
    c[2] = x[3] * x[7] - x[4] * x[6]
    c[3] = x[2] * x[7] - x[1] * x[8]
    c[4] = x[0] * x[8] - x[2] * x[6]
    c[5] = x[1] * x[6] - x[0] * x[7]
    c[6] = x[1] * x[5] - x[2] * x[4]
    c[7] = x[2] * x[3] - x[0] * x[5]
    c[8] = x[0] * x[4] - x[1] * x[3]
    det = x[0] * c[0] + x[1] * c[1] + x[2] * c[2]
    for i in range(9):
        x[i] = 0.5 * (x[i] + c[i] / det)


def rk4_rotation(const double[:, ::1] r0, double v, double u, double duration, double dt):
    """Integrate dR/dt = R Omega(v, u) over ``duration`` with classic RK4.

    Omega is constant, so the four stages collapse to R <- R (I + hW + (hW)^2/2
    + (hW)^3/6 + (hW)^4/24); each step is followed by two Newton iterations
    of the orthogonal polar factor.
    """
    cdef int n, i, k
    cdef double h
    cdef double w[9]
    cdef double w2[9]
    cdef double w3[9]
    cdef double w4[9]
    cdef double phi[9]
    cdef double x[9]
    cdef double tmp[9]
    out = np.empty((3, 3))
    cdef double[:, ::1] o = out
    for i in range(3):
        for k in range(3):
            x[3 * i + k] = r0[i, k]
    if duration <= 0.0:
        for i in range(9):
            o[i // 3, i % 3] = x[i]
        return out
    n = <int>ceil(duration / dt - 1e-12)
    if n < 1:
        n = 1
    h = duration / n
    for i in range(9):
        w[i] = 0.0
    w[1] = -v * h
    w[3] = v * h
    w[5] = -u * h
    w[7] = u * h
    with nogil:
        _matmul(w, w, w2)
        _matmul(w2, w, w3)
        _matmul(w3, w, w4)
        for i in range(9):
            phi[i] = w[i] + w2[i] / 2.0 + w3[i] / 6.0 + w4[i] / 24.0
        phi[0] += 1.0
        phi[4] += 1.0
        phi[8] += 1.0
        for k in range(n):
            _matmul(x, phi, tmp)
            _polar_step(tmp)
            _polar_step(tmp)
            for i in range(9):
                x[i] = tmp[i]
    for i in range(9):
        o[i // 3, i % 3] = x[i]
    return out
