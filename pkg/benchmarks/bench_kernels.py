"""Compiled vs pure-Python kernel timings.

    python benchmarks/bench_kernels.py [--samples 1000] [--n 1000] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from catlyap import kernels
from catlyap.cocycle import CocycleParams, orbit_values
from catlyap.lyapunov import draw_phases
from catlyap.potential import exponential
from catlyap.torus import cat_map


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    v, tmap = exponential(normalized=True), cat_map()
    params = CocycleParams.scaled(100.0, 0.5)
    warm = 32
    V = orbit_values(v, tmap, draw_phases(args.samples, 1), args.n + warm)
    renorm = kernels.renorm_interval(params.lam, params.energy, 1.0)
    ck = np.array([args.n], dtype=np.intp)
    cases = {
        "log_stretch": lambda k: k.log_stretch(V, params.lam, params.energy, kernels.RAW, args.n, warm, renorm,
                                               args.threads),
        "log_norms": lambda k: k.log_norms(V, params.lam, params.energy, kernels.REDUCED, ck, renorm,
                                           args.threads)[0],
        "theta_lift": lambda k: k.theta_lift(np.ascontiguousarray(V[:, :11]), params.lam, params.t, args.threads),
    }
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    print(f"samples={args.samples} n={args.n} threads={args.threads} compiled={'cython' in backends}")
    print(f"{'kernel':<12} {'backend':<8} {'seconds':>10} {'speedup':>8} {'max |diff|':>11}")
    for name, fn in cases.items():
        ref_t, ref = _best(lambda: fn(kernels.get_backend("python")), args.repeat)
        print(f"{name:<12} {'python':<8} {ref_t:>10.4f} {1.0:>8.1f} {'-':>11}")
        if "cython" in backends:
            t, out = _best(lambda: fn(kernels.get_backend("cython")), args.repeat)
            diff = float(np.max(np.abs(np.asarray(out) - np.asarray(ref))))
            print(f"{name:<12} {'cython':<8} {t:>10.4f} {ref_t / t:>8.1f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
