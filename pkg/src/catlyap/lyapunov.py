"""Lyapunov exponent estimators for the cocycles in :mod:`catlyap.cocycle`.

Phases are drawn once, up front, from ``numpy.random.default_rng(seed)``; each
sample's transfer product is then independent of every other, so results do
not depend on the number of threads. Sample means are taken with numpy's
pairwise summation in sample order.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .angle import AngleKernel, HALF_PI, leaf_pieces, lift_at, refine
from .cocycle import CocycleParams, orbit_values
from .errors import OutOfRange
from .leaves import Leaf, leaf_from_z
from .potential import Potential
from .torus import HyperbolicToralMap

ESTIMATORS = ("vector_iteration", "norm_product", "leaf_restricted")
WARMUP = 32
BLOCK_ELEMENTS = 1 << 22  # orbit values held in memory at once


@dataclass(frozen=True)
class LyapunovEstimate:
    value: float
    n: int
    samples: int
    stderr: float
    estimator: str
    kind: str = "raw"
    per_sample: np.ndarray | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class SubadditiveTrace:
    word_lengths: list[int]
    averages: list[float]
    stderrs: list[float]

    def max_increase(self) -> float:
        """Largest rise ``a_m - a_n`` for m > n, in units of combined stderr."""
        worst = -math.inf
        for i in range(len(self.averages)):
            for j in range(i + 1, len(self.averages)):
                se = math.hypot(self.stderrs[i], self.stderrs[j]) or 1e-300
                worst = max(worst, (self.averages[j] - self.averages[i]) / se)
        return worst


@dataclass(frozen=True)
class LowerBoundCertificate:
    value: float
    log_lambda: float
    per_step: list[float]
    length: float
    n: int


def default_threads() -> int:
    env = os.environ.get("CATLYAP_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def draw_phases(samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return rng.random((samples, 2))


def _stats(x: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(x))
    se = float(np.std(x, ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0
    return mean, se


def per_sample_exponents(v: Potential, params: CocycleParams, tmap: HyperbolicToralMap, pts: np.ndarray, n: int,
                         kind="raw", estimator: str = "vector_iteration", warmup: int = WARMUP,
                         threads: int | None = None, backend: str | None = None) -> np.ndarray:
    """(1/n) log-growth per starting point ``pts[i]``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    code = kernels.kind_code(kind)
    if code != kernels.RAW and not params.lam > 0:
        raise OutOfRange("conjugated / reduced / polar cocycles need lambda > 0")
    ker = kernels.get_backend(backend)
    threads = threads or 1
    if estimator == "norm_product":
        warmup = 0
    steps = warmup + n
    block = max(1, BLOCK_ELEMENTS // (steps + 1))
    vmax = max(1.0, v.sup_norm) if math.isfinite(v.sup_norm) else 1.0
    renorm = kernels.renorm_interval(params.lam, params.energy, vmax)
    out = np.empty(len(pts))
    for lo in range(0, len(pts), block):
        V = orbit_values(v, tmap, pts[lo:lo + block], steps)
        if estimator == "norm_product":
            ls = ker.log_norms(V, float(params.lam), float(params.energy), code,
                               kernels.as_checkpoints([n]), renorm, threads)[:, 0]
        elif estimator in ("vector_iteration", "leaf_restricted"):
            ls = ker.log_stretch(V, float(params.lam), float(params.energy), code, n, warmup, renorm, threads)
        else:
            raise ValueError(f"unknown estimator {estimator!r}")
        out[lo:lo + block] = ls / n
    return out


def estimate_torus(v: Potential, params: CocycleParams, tmap: HyperbolicToralMap, n: int, samples: int, seed: int,
                   cocycle_kind="raw", estimator: str = "vector_iteration", warmup: int = WARMUP,
                   threads: int | None = None, backend: str | None = None) -> LyapunovEstimate:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    pts = draw_phases(samples, seed)
    x = per_sample_exponents(v, params, tmap, pts, n, cocycle_kind, estimator, warmup, threads, backend)
    mean, se = _stats(x)
    return LyapunovEstimate(mean, n, samples, se, estimator, str(cocycle_kind), x)


def leaf_phases(leaf: Leaf, samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    s = rng.random(samples) * leaf.length
    return np.clip(leaf.point_array(s), 0.0, np.nextafter(1.0, 0.0))


def estimate_leaf(v: Potential, params: CocycleParams, tmap: HyperbolicToralMap, z: float, n: int, samples: int,
                  seed: int, cocycle_kind="raw", warmup: int = WARMUP, threads: int | None = None,
                  backend: str | None = None) -> LyapunovEstimate:
    leaf = leaf_from_z(z, tmap)
    pts = leaf_phases(leaf, samples, seed)
    x = per_sample_exponents(v, params, tmap, pts, n, cocycle_kind, "vector_iteration", warmup, threads, backend)
    mean, se = _stats(x)
    return LyapunovEstimate(mean, n, samples, se, "leaf_restricted", str(cocycle_kind), x)


def subadditive_trace(v: Potential, params: CocycleParams, tmap: HyperbolicToralMap, word_lengths, samples: int,
                      seed: int, cocycle_kind="raw", threads: int | None = None,
                      backend: str | None = None) -> SubadditiveTrace:
    ns = [int(n) for n in word_lengths]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 1:
        raise ValueError("word_lengths must be a nonempty increasing list of positive integers")
    pts = draw_phases(samples, seed)
    code = kernels.kind_code(cocycle_kind)
    ker = kernels.get_backend(backend)
    V = orbit_values(v, tmap, pts, ns[-1])
    vmax = max(1.0, v.sup_norm) if math.isfinite(v.sup_norm) else 1.0
    renorm = kernels.renorm_interval(params.lam, params.energy, vmax)
    L = ker.log_norms(V, float(params.lam), float(params.energy), code, np.asarray(ns, dtype=np.intp), renorm,
                      threads or 1)
    avgs, ses = [], []
    for j, n in enumerate(ns):
        m, se = _stats(L[:, j] / n)
        avgs.append(m)
        ses.append(se)
    return SubadditiveTrace(ns, avgs, ses)


# -- integral lower bound ----------------------------------------------------------

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(8)
GRADING = 0.25
GRADED_CELLS = 24


def _gauss(a, b):
    """Nodes and weights of the 8-point rule on each ``[a_i, b_i]``."""
    half = 0.5 * (b - a)
    x = 0.5 * (a + b)[:, None] + half[:, None] * GL_NODES[None]
    return x, half[:, None] * GL_WEIGHTS[None]


def log_cos_integrals(kernel: AngleKernel, tmap: HyperbolicToralMap, leaf: Leaf, n: int,
                      cells_per_interval: int = 1) -> list[float]:
    """``int_W log|cos theta_j| ds`` for ``j = 0..n-1`` (arclength measure).

    Each monotone interval of the refined lift is integrated with Gauss-
    Legendre; intervals ending at a zero of ``cos theta_j`` get a geometric
    mesh graded toward the zero, and the innermost cell uses the local model
    ``log|theta - c| ~ log(slope * x)``, integrated exactly.
    """
    return [_log_cos_one(kernel, tmap, leaf, j, cells_per_interval) for j in range(n)]


def _log_cos_one(kernel, tmap, leaf, j, cells):
    from .angle import _invert  # local: shares the bracketed root finder

    lp = leaf_pieces(tmap, leaf, j)
    rl = refine(kernel, lp)
    sl, sr, tl, tr, idx = rl.sl, rl.sr, rl.tl, rl.tr, rl.idx
    # split intervals at every zero of cos(theta_j)
    has = rl.crossings() > 0
    if has.any():
        lo_t = np.minimum(tl[has], tr[has])
        c = HALF_PI + np.ceil((lo_t - HALF_PI) / math.pi) * math.pi
        sc = _invert(kernel, lp, c, sl[has], sr[has], tl[has], tr[has], idx[has])
        a = np.concatenate([sl[~has], sl[has], sc])
        b = np.concatenate([sr[~has], sc, sr[has]])
        pid = np.concatenate([idx[~has], idx[has], idx[has]])
        sing_a = np.concatenate([np.zeros((~has).sum(), bool), np.zeros(has.sum(), bool), np.ones(has.sum(), bool)])
        sing_b = np.concatenate([np.zeros((~has).sum(), bool), np.ones(has.sum(), bool), np.zeros(has.sum(), bool)])
    else:
        a, b, pid = sl, sr, idx
        sing_a = sing_b = np.zeros(a.size, bool)
    keep = b > a
    a, b, pid, sing_a, sing_b = a[keep], b[keep], pid[keep], sing_a[keep], sing_b[keep]

    total = 0.0
    # regular intervals: plain composite rule
    reg = ~(sing_a | sing_b)
    if reg.any():
        edges = np.linspace(0.0, 1.0, cells + 1)
        A = (a[reg, None] + (b - a)[reg, None] * edges[None, :-1]).ravel()
        B = (a[reg, None] + (b - a)[reg, None] * edges[None, 1:]).ravel()
        P = np.repeat(pid[reg], cells)
        x, w = _gauss(A, B)
        th = lift_at(kernel, lp, x.ravel(), np.repeat(P, GL_NODES.size))
        total += float(np.sum(w.ravel() * np.log(np.abs(np.cos(th)))))
    # singular intervals: reflect so the zero sits at the left end
    for mask, at_left in ((sing_a & ~sing_b, True), (sing_b & ~sing_a, False), (sing_a & sing_b, None)):
        if not mask.any():
            continue
        if at_left is None:
            mid = 0.5 * (a[mask] + b[mask])
            total += _graded(kernel, lp, a[mask], mid, pid[mask], True)
            total += _graded(kernel, lp, mid, b[mask], pid[mask], False)
        else:
            total += _graded(kernel, lp, a[mask], b[mask], pid[mask], at_left)
    return total


def _graded(kernel, lp, a, b, pid, zero_at_left):
    """Integral of log|cos theta| over ``[a, b]`` with a zero at one end."""
    L = b - a
    k = np.arange(GRADED_CELLS + 1)
    frac = GRADING ** k  # 1, q, q^2, ... measured from the singular end
    inner = frac[-1]
    A = frac[1:]
    B = frac[:-1]
    total = 0.0
    # graded cells [q^{k+1}, q^k] in units of L away from the zero
    for lo_f, hi_f in zip(A, B):
        if zero_at_left:
            lo, hi = a + lo_f * L, a + hi_f * L
        else:
            lo, hi = b - hi_f * L, b - lo_f * L
        x, w = _gauss(lo, hi)
        th = lift_at(kernel, lp, x.ravel(), np.repeat(pid, GL_NODES.size))
        total += float(np.sum(w.ravel() * np.log(np.abs(np.cos(th)))))
    # innermost cell of width eps: log|cos th| ~ log|th - c| ~ log(slope * x)
    eps = inner * L
    edge = a + eps if zero_at_left else b - eps
    th_e = lift_at(kernel, lp, edge, pid)
    dist = np.abs(np.cos(th_e))  # |sin(th - c)| ~ |th - c| at the cell edge
    total += float(np.sum(eps * (np.log(dist) - 1.0)))
    return total


def certificate_value(per_step, length: float, lam: float) -> float:
    n = len(per_step)
    return math.log(lam) + float(np.sum(per_step)) / (n * length)


def lower_bound_certificate(v: Potential, params: CocycleParams, tmap: HyperbolicToralMap, z: float, n: int,
                            resolution: int = 1) -> LowerBoundCertificate:
    """``log lam + (1/n) sum_j mean_W log|cos theta_j|``, a lower bound on the leaf exponent.

    ``resolution`` is the number of Gauss-Legendre cells per regular interval.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    leaf = leaf_from_z(z, tmap)
    kernel = AngleKernel(v, params)
    per = log_cos_integrals(kernel, tmap, leaf, n, max(1, int(resolution)))
    return LowerBoundCertificate(certificate_value(per, leaf.length, params.lam), math.log(params.lam), per,
                                 leaf.length, n)
