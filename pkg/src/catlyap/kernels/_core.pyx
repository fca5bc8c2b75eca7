# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled 2x2 transfer-product kernels.

Every routine mirrors ``_fallback.py`` operation for operation; the two must
stay in sync (tests/test_kernels.py compares them).
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport sqrt, log, hypot, atan2, floor, sin, cos, fabs

cnp.import_array()

DEF RAW = 0
DEF CONJUGATED = 1
DEF REDUCED = 2
DEF POLAR = 3
DEF PI = 3.141592653589793


ctypedef struct Mat:
    double m11
    double m12
    double m21
    double m22


ctypedef struct Acc:
    double s
    double c


cdef inline Mat step_matrix(int kind, double lam, double energy, double v0, double v1) noexcept nogil:
    cdef Mat m
    cdef double r0, r1, q, k, inv4, base, beta0, beta1, f0, f1, p0, q0, p1, q1, n0, n1
    cdef double x11, x12, x21, x22, o11, o12, o21, o22
    if kind == RAW:
        m.m11 = energy - lam * v0
        m.m12 = -1.0
        m.m21 = 1.0
        m.m22 = 0.0
    elif kind == CONJUGATED:
        m.m11 = energy - lam * v0
        m.m12 = -1.0 / lam
        m.m21 = lam
        m.m22 = 0.0
    elif kind == REDUCED:
        r0 = energy / lam - v0
        r1 = energy / lam - v1
        q = 1.0 / sqrt(1.0 + r0 * r0)
        k = lam * sqrt(1.0 + r1 * r1)
        m.m11 = k * r0 * q
        m.m12 = -k * q
        m.m21 = q / k
        m.m22 = r0 * q / k
    else:
        r0 = energy / lam - v0
        r1 = energy / lam - v1
        inv4 = 1.0 / (lam * lam * lam * lam)
        base = r0 * r0 + 1.0 + inv4
        beta0 = base + sqrt(base * base - 4.0 * inv4)
        base = r1 * r1 + 1.0 + inv4
        beta1 = base + sqrt(base * base - 4.0 * inv4)
        p0 = beta0 - 2.0 * inv4
        q0 = 2.0 * r0 / (lam * lam)
        f0 = 1.0 / sqrt(p0 * p0 + q0 * q0)
        p0 = p0 * f0
        q0 = q0 * f0
        p1 = beta1 - 2.0 * inv4
        q1 = 2.0 * r1 / (lam * lam)
        f1 = 1.0 / sqrt(p1 * p1 + q1 * q1)
        p1 = p1 * f1
        q1 = q1 * f1
        n0 = lam * sqrt(beta0 / 2.0)
        n1 = lam * sqrt(beta1 / 2.0)
        x11 = (lam * r0 * p0 + q0 / lam) / n0
        x12 = (lam * r0 * q0 - p0 / lam) * n0
        x21 = lam * p0 / n0
        x22 = lam * q0 * n0
        o11 = p1 * x11 - q1 * x21
        o12 = p1 * x12 - q1 * x22
        o21 = q1 * x11 + p1 * x21
        o22 = q1 * x12 + p1 * x22
        m.m11 = n1 * o11
        m.m12 = n1 * o12
        m.m21 = o21 / n1
        m.m22 = o22 / n1
    return m


cdef inline Acc zero_acc() noexcept nogil:
    cdef Acc acc
    acc.s = 0.0
    acc.c = 0.0
    return acc


cdef inline Acc kahan_add(Acc acc, double x) noexcept nogil:
    # Neumaier variant
    cdef double t = acc.s + x
    if fabs(acc.s) >= fabs(x):
        acc.c = acc.c + ((acc.s - t) + x)
    else:
        acc.c = acc.c + ((x - t) + acc.s)
    acc.s = t
    return acc


cdef inline double opnorm(double a, double b, double c, double d) noexcept nogil:
    return 0.5 * (hypot(a + d, c - b) + hypot(a - d, b + c))


def log_stretch(double[:, ::1] V, double lam, double energy, int kind, Py_ssize_t n,
                Py_ssize_t warmup, int renorm, int nthreads=1):
    cdef Py_ssize_t S = V.shape[0]
    cdef Py_ssize_t i, j, cnt
    cdef double x, y, x2, nr
    cdef Mat m
    cdef Acc acc
    out = np.empty(S, dtype=np.float64)
    cdef double[::1] o = out
    for i in prange(S, nogil=True, num_threads=nthreads, schedule="static"):
        x = 1.0
        y = 0.0
        cnt = 0
        for j in range(warmup):
            m = step_matrix(kind, lam, energy, V[i, j], V[i, j + 1])
            x2 = m.m11 * x + m.m12 * y
            y = m.m21 * x + m.m22 * y
            x = x2
            cnt = cnt + 1
            if cnt == renorm:
                nr = hypot(x, y)
                x = x / nr
                y = y / nr
                cnt = 0
        nr = hypot(x, y)
        x = x / nr
        y = y / nr
        cnt = 0
        acc = zero_acc()
        for j in range(warmup, warmup + n):
            m = step_matrix(kind, lam, energy, V[i, j], V[i, j + 1])
            x2 = m.m11 * x + m.m12 * y
            y = m.m21 * x + m.m22 * y
            x = x2
            cnt = cnt + 1
            if cnt == renorm:
                nr = hypot(x, y)
                x = x / nr
                y = y / nr
                acc = kahan_add(acc, log(nr))
                cnt = 0
        acc = kahan_add(acc, log(hypot(x, y)))
        o[i] = acc.s + acc.c
    return out


def log_norms(double[:, ::1] V, double lam, double energy, int kind, Py_ssize_t[::1] checkpoints,
              int renorm, int nthreads=1):
    cdef Py_ssize_t S = V.shape[0]
    cdef Py_ssize_t K = checkpoints.shape[0]
    cdef Py_ssize_t nmax = checkpoints[K - 1]
    cdef Py_ssize_t i, j, kk, cnt
    cdef double a, b, cc, d, t1, t2, nr
    cdef Mat m
    cdef Acc acc
    out = np.empty((S, K), dtype=np.float64)
    cdef double[:, ::1] o = out
    for i in prange(S, nogil=True, num_threads=nthreads, schedule="static"):
        a = 1.0
        b = 0.0
        cc = 0.0
        d = 1.0
        acc = zero_acc()
        cnt = 0
        kk = 0
        for j in range(nmax):
            m = step_matrix(kind, lam, energy, V[i, j], V[i, j + 1])
            t1 = m.m11 * a + m.m12 * cc
            t2 = m.m11 * b + m.m12 * d
            cc = m.m21 * a + m.m22 * cc
            d = m.m21 * b + m.m22 * d
            a = t1
            b = t2
            cnt = cnt + 1
            if cnt == renorm:
                nr = opnorm(a, b, cc, d)
                a = a / nr
                b = b / nr
                cc = cc / nr
                d = d / nr
                acc = kahan_add(acc, log(nr))
                cnt = 0
            while kk < K and checkpoints[kk] == j + 1:
                o[i, kk] = (acc.s + acc.c) + log(opnorm(a, b, cc, d))
                kk = kk + 1
    return out


def transfer_product(double[::1] vals, double lam, double energy, int kind, Py_ssize_t n, int renorm):
    """Ordered product of ``n`` step matrices along one orbit.

    Returns ``(m11, m12, m21, m22, log_scale)`` with the matrix normalized to
    unit operator norm at the last renormalization.
    """
    cdef Py_ssize_t j, cnt = 0
    cdef double a = 1.0, b = 0.0, cc = 0.0, d = 1.0, t1, t2, nr
    cdef Mat m
    cdef Acc acc
    acc = zero_acc()
    with nogil:
        for j in range(n):
            m = step_matrix(kind, lam, energy, vals[j], vals[j + 1])
            t1 = m.m11 * a + m.m12 * cc
            t2 = m.m11 * b + m.m12 * d
            cc = m.m21 * a + m.m22 * cc
            d = m.m21 * b + m.m22 * d
            a = t1
            b = t2
            cnt = cnt + 1
            if cnt == renorm:
                nr = opnorm(a, b, cc, d)
                a = a / nr
                b = b / nr
                cc = cc / nr
                d = d / nr
                acc = kahan_add(acc, log(nr))
                cnt = 0
    return a, b, cc, d, acc.s + acc.c


def theta_lift(double[:, ::1] V, double lam, double t, int nthreads=1):
    """Lifted angles theta_k, k = 0..K-1, along rows of potential values."""
    cdef Py_ssize_t P = V.shape[0]
    cdef Py_ssize_t K = V.shape[1]
    cdef Py_ssize_t i, k
    cdef double th, r, a2, kk, psi
    out = np.empty((P, K), dtype=np.float64)
    cdef double[:, ::1] o = out
    for i in prange(P, nogil=True, num_threads=nthreads, schedule="static"):
        th = atan2(1.0, t - V[i, 0])
        o[i, 0] = th
        for k in range(1, K):
            r = t - V[i, k]
            a2 = lam * lam * (r * r + 1.0)
            kk = floor(th / PI)
            psi = th - kk * PI
            th = kk * PI + atan2(sin(psi), a2 * cos(psi)) + atan2(1.0, r)
            o[i, k] = th
    return out
