# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for log I_m(z); mirrors the routes of ``_bessel_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, log, cosh, sinh, hypot, lgamma, M_PI, INFINITY

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex clog(double complex)
    double complex csqrt(double complex)
    double complex ccos(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)

from ._debye import DEBYE_TERMS, debye_table

cdef double DEBYE_MIN_S = 40.0
cdef int SERIES_MAX_TERMS = 160
cdef double RECESSIVE_CUTOFF = 20.0
cdef double LOG_2PI = log(2.0 * M_PI)
cdef double GOLDEN = 0.5 * (sqrt(5.0) - 1.0)
cdef int SADDLE_ITERS = 40

cdef double[:, ::1] _TABLE = np.ascontiguousarray(debye_table(DEBYE_TERMS))
cdef int _NTERMS = DEBYE_TERMS


cdef double complex _series(double m, double complex z) nogil:
    cdef double complex q = 0.25 * z * z
    cdef double complex term = 1.0
    cdef double complex total = 1.0
    cdef int k
    for k in range(1, SERIES_MAX_TERMS):
        term = term * q / (k * (m + k))
        total = total + term
        if cabs(term) <= 1e-17 * cabs(total):
            break
    return m * clog(0.5 * z) - lgamma(m + 1.0) + clog(total)


cdef double complex _debye(double m, double complex z, double complex s) nogil:
    cdef double complex p2 = (m / s) * (m / s)
    cdef double complex inv_s = 1.0 / s
    cdef double complex s_plus = 0.0
    cdef double complex s_minus = 0.0
    cdef double complex power = 1.0
    cdef double complex vk, w, eta, head, total
    cdef int k, j
    for k in range(_NTERMS):
        vk = 0.0
        for j in range(k, -1, -1):
            vk = vk * p2 + _TABLE[k, j]
        w = vk * power
        s_plus = s_plus + w
        if k % 2 == 0:
            s_minus = s_minus + w
        else:
            s_minus = s_minus - w
        power = power * inv_s
    if m > 0:
        eta = s + m * clog(z / (m + s))
    else:
        eta = s
    head = eta - 0.5 * (LOG_2PI + clog(s))
    total = s_plus
    if cabs(z) > m and creal(eta) < RECESSIVE_CUTOFF:
        if (<long> m) % 2 == 0:
            total = s_plus + 1j * cexp(-2.0 * eta) * s_minus
        else:
            total = s_plus - 1j * cexp(-2.0 * eta) * s_minus
    return head + clog(total)


cdef inline double _height(double m, double x, double y, double tau) nogil:
    return hypot(x * cosh(tau), y * sinh(tau)) + m * tau


cdef void _saddle(double m, double complex z, double* tau_out, double* h_out) nogil:
    # golden-section search of the convex contour height on [-8, 8]
    cdef double x = fabs(creal(z))
    cdef double y = fabs(cimag(z))
    cdef double lo = -8.0, hi = 8.0
    cdef double a = hi - GOLDEN * (hi - lo)
    cdef double b = lo + GOLDEN * (hi - lo)
    cdef double fa = _height(m, x, y, a)
    cdef double fb = _height(m, x, y, b)
    cdef int i
    for i in range(SADDLE_ITERS):
        if fa < fb:
            hi = b
            b = a
            fb = fa
            a = hi - GOLDEN * (hi - lo)
            fa = _height(m, x, y, a)
        else:
            lo = a
            a = b
            fa = fb
            b = lo + GOLDEN * (hi - lo)
            fb = _height(m, x, y, b)
    tau_out[0] = 0.5 * (lo + hi)
    h_out[0] = _height(m, x, y, tau_out[0])


cdef double complex _trapezoid(double m, double complex z) nogil:
    cdef double tau, height
    _saddle(m, z, &tau, &height)
    cdef double az = cabs(z)
    cdef long n = <long> (m + az * cosh(tau) + 10.0 * (az + m) ** (1.0 / 3.0) + 48)
    cdef double complex acc = 0.0
    cdef double complex t
    cdef long k
    for k in range(n):
        t = 2.0 * M_PI * k / n + 1j * tau
        acc = acc + cexp(z * ccos(t) - 1j * m * t - height)
    return height + clog(acc / n)


cdef double complex _log_iv_one(long mi, double complex z) nogil:
    cdef bint flip = creal(z) < 0
    cdef double complex w = -z if flip else z
    cdef bint cj = cimag(w) < 0
    cdef double m = <double> mi
    cdef double complex s, out
    cdef double aw, abs_s, reach, s_abs, scale, tau, height
    if cj:
        w = conj(w)
    if creal(w) == 0 and cimag(w) == 0:
        if mi == 0:
            return 0.0
        return -INFINITY
    s = csqrt(m * m + w * w)
    aw = cabs(w)
    abs_s = cabs(s)
    reach = abs_s * min(1.0, (abs_s / max(m, 1.0)) ** 2)
    if abs_s >= DEBYE_MIN_S and reach >= DEBYE_MIN_S:
        out = _debye(m, w, s)
    else:
        s_abs = sqrt(m * m + aw * aw)
        scale = s_abs + m * log(aw / (m + s_abs))
        _saddle(m, w, &tau, &height)
        if scale - height <= 5.0 or aw <= 2.0:
            out = _series(m, w)
        else:
            out = _trapezoid(m, w)
    if cj:
        out = conj(out)
    if flip and mi % 2 == 1:
        out = out + 1j * M_PI
    return out


def log_iv(m, z):
    """Vectorised log I_m(z). Zeros of I_m (z = 0, m >= 1) map to -inf."""
    m_arr = np.asarray(m, dtype=np.int64)
    z_arr = np.asarray(z, dtype=complex)
    m_arr, z_arr = np.broadcast_arrays(m_arr, z_arr)
    shape = z_arr.shape
    cdef cnp.int64_t[::1] mv = np.ascontiguousarray(m_arr.ravel())
    cdef double complex[::1] zv = np.ascontiguousarray(z_arr.ravel())
    if mv.shape[0] and np.min(mv) < 0:
        raise ValueError("order must be non-negative")
    out = np.empty(zv.shape[0], dtype=complex)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(zv.shape[0]):
            ov[i] = _log_iv_one(mv[i], zv[i])
    return out.reshape(shape)
