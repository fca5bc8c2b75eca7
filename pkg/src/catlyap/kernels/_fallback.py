"""Pure numpy implementation of the transfer-product kernels.

Vectorized over samples; mirrors ``_core.pyx`` step for step. Work is split
into fixed-size chunks so per-sample results do not depend on the number of
worker threads.
"""
from concurrent.futures import ThreadPoolExecutor

import numpy as np

RAW, CONJUGATED, REDUCED, POLAR = 0, 1, 2, 3
CHUNK = 256


def step_matrix(kind, lam, energy, v0, v1):
    if kind == RAW:
        return energy - lam * v0, -1.0, 1.0, 0.0
    if kind == CONJUGATED:
        return energy - lam * v0, -1.0 / lam, lam, 0.0
    r0 = energy / lam - v0
    r1 = energy / lam - v1
    if kind == REDUCED:
        q = 1.0 / np.sqrt(1.0 + r0 * r0)
        k = lam * np.sqrt(1.0 + r1 * r1)
        return k * r0 * q, -k * q, q / k, r0 * q / k
    inv4 = 1.0 / (lam * lam * lam * lam)
    base = r0 * r0 + 1.0 + inv4
    beta0 = base + np.sqrt(base * base - 4.0 * inv4)
    base = r1 * r1 + 1.0 + inv4
    beta1 = base + np.sqrt(base * base - 4.0 * inv4)
    p0 = beta0 - 2.0 * inv4
    q0 = 2.0 * r0 / (lam * lam)
    f0 = 1.0 / np.sqrt(p0 * p0 + q0 * q0)
    p0 = p0 * f0
    q0 = q0 * f0
    p1 = beta1 - 2.0 * inv4
    q1 = 2.0 * r1 / (lam * lam)
    f1 = 1.0 / np.sqrt(p1 * p1 + q1 * q1)
    p1 = p1 * f1
    q1 = q1 * f1
    n0 = lam * np.sqrt(beta0 / 2.0)
    n1 = lam * np.sqrt(beta1 / 2.0)
    x11 = (lam * r0 * p0 + q0 / lam) / n0
    x12 = (lam * r0 * q0 - p0 / lam) * n0
    x21 = lam * p0 / n0
    x22 = lam * q0 * n0
    o11 = p1 * x11 - q1 * x21
    o12 = p1 * x12 - q1 * x22
    o21 = q1 * x11 + p1 * x21
    o22 = q1 * x12 + p1 * x22
    return n1 * o11, n1 * o12, o21 / n1, o22 / n1


def _kahan_add(s, c, x):
    t = s + x
    c = c + np.where(np.abs(s) >= np.abs(x), (s - t) + x, (x - t) + s)
    return t, c


def _opnorm(a, b, c, d):
    return 0.5 * (np.hypot(a + d, c - b) + np.hypot(a - d, b + c))


def _chunked(fn, S, nthreads):
    bounds = [(lo, min(lo + CHUNK, S)) for lo in range(0, S, CHUNK)]
    if nthreads <= 1 or len(bounds) <= 1:
        parts = [fn(lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=nthreads) as ex:
            parts = list(ex.map(lambda b: fn(*b), bounds))
    return parts


def log_stretch(V, lam, energy, kind, n, warmup, renorm, nthreads=1):
    V = np.ascontiguousarray(V, dtype=np.float64)

    def work(lo, hi):
        W = V[lo:hi]
        x = np.ones(hi - lo)
        y = np.zeros(hi - lo)
        cnt = 0
        for j in range(warmup):
            m11, m12, m21, m22 = step_matrix(kind, lam, energy, W[:, j], W[:, j + 1])
            x, y = m11 * x + m12 * y, m21 * x + m22 * y
            cnt += 1
            if cnt == renorm:
                nr = np.hypot(x, y)
                x = x / nr
                y = y / nr
                cnt = 0
        nr = np.hypot(x, y)
        x = x / nr
        y = y / nr
        cnt = 0
        s = np.zeros(hi - lo)
        c = np.zeros(hi - lo)
        for j in range(warmup, warmup + n):
            m11, m12, m21, m22 = step_matrix(kind, lam, energy, W[:, j], W[:, j + 1])
            x, y = m11 * x + m12 * y, m21 * x + m22 * y
            cnt += 1
            if cnt == renorm:
                nr = np.hypot(x, y)
                x = x / nr
                y = y / nr
                s, c = _kahan_add(s, c, np.log(nr))
                cnt = 0
        s, c = _kahan_add(s, c, np.log(np.hypot(x, y)))
        return s + c

    parts = _chunked(work, V.shape[0], nthreads)
    return np.concatenate(parts) if parts else np.empty(0)


def log_norms(V, lam, energy, kind, checkpoints, renorm, nthreads=1):
    V = np.ascontiguousarray(V, dtype=np.float64)
    checkpoints = np.asarray(checkpoints, dtype=np.intp)
    K = len(checkpoints)
    nmax = int(checkpoints[-1])

    def work(lo, hi):
        W = V[lo:hi]
        m = hi - lo
        a = np.ones(m)
        b = np.zeros(m)
        cc = np.zeros(m)
        d = np.ones(m)
        s = np.zeros(m)
        c = np.zeros(m)
        out = np.empty((m, K))
        cnt = 0
        kk = 0
        for j in range(nmax):
            m11, m12, m21, m22 = step_matrix(kind, lam, energy, W[:, j], W[:, j + 1])
            a, b, cc, d = m11 * a + m12 * cc, m11 * b + m12 * d, m21 * a + m22 * cc, m21 * b + m22 * d
            cnt += 1
            if cnt == renorm:
                nr = _opnorm(a, b, cc, d)
                a = a / nr
                b = b / nr
                cc = cc / nr
                d = d / nr
                s, c = _kahan_add(s, c, np.log(nr))
                cnt = 0
            while kk < K and checkpoints[kk] == j + 1:
                out[:, kk] = (s + c) + np.log(_opnorm(a, b, cc, d))
                kk += 1
        return out

    parts = _chunked(work, V.shape[0], nthreads)
    return np.concatenate(parts, axis=0) if parts else np.empty((0, K))


def transfer_product(vals, lam, energy, kind, n, renorm):
    vals = np.asarray(vals, dtype=np.float64)
    a, b, cc, d = 1.0, 0.0, 0.0, 1.0
    s = np.zeros(1)
    c = np.zeros(1)
    cnt = 0
    for j in range(n):
        m11, m12, m21, m22 = (float(x) for x in step_matrix(kind, lam, energy, vals[j], vals[j + 1]))
        a, b, cc, d = m11 * a + m12 * cc, m11 * b + m12 * d, m21 * a + m22 * cc, m21 * b + m22 * d
        cnt += 1
        if cnt == renorm:
            nr = float(_opnorm(a, b, cc, d))
            a, b, cc, d = a / nr, b / nr, cc / nr, d / nr
            s, c = _kahan_add(s, c, np.log(nr))
            cnt = 0
    return a, b, cc, d, float((s + c)[0])


def theta_lift(V, lam, t, nthreads=1):
    V = np.ascontiguousarray(V, dtype=np.float64)
    P, K = V.shape
    out = np.empty((P, K))
    th = np.arctan2(1.0, t - V[:, 0])
    out[:, 0] = th
    for k in range(1, K):
        r = t - V[:, k]
        a2 = lam * lam * (r * r + 1.0)
        kk = np.floor(th / np.pi)
        psi = th - kk * np.pi
        th = kk * np.pi + np.arctan2(np.sin(psi), a2 * np.cos(psi)) + np.arctan2(1.0, r)
        out[:, k] = th
    return out
