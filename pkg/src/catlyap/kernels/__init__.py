"""Backend selection for the hot 2x2 kernels.

The compiled extension ``_core`` is used when it is importable; otherwise the
numpy implementation in ``_fallback`` is. Setting ``CATLYAP_PURE_PYTHON=1``
forces the fallback.
"""
import math
import os

import numpy as np

from . import _fallback

RAW, CONJUGATED, REDUCED, POLAR = 0, 1, 2, 3
KINDS = {"raw": RAW, "conjugated": CONJUGATED, "reduced": REDUCED, "polar": POLAR}
MAX_RENORM = 32

try:
    if os.environ.get("CATLYAP_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from . import _core
except ImportError:
    _core = None

BACKEND = "cython" if _core is not None else "python"


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` ('cython', 'python' or None for default)."""
    if name is None:
        name = BACKEND
    if name == "cython":
        if _core is None:
            raise RuntimeError("compiled kernels are not available in this build")
        return _core
    if name == "python":
        return _fallback
    raise ValueError(f"unknown backend {name!r}")


def kind_code(kind) -> int:
    if isinstance(kind, str):
        if kind not in KINDS:
            raise ValueError(f"unknown cocycle kind {kind!r}; expected one of {', '.join(KINDS)}")
        return KINDS[kind]
    return int(kind)


def renorm_interval(lam: float, energy: float, vmax: float = 1.0) -> int:
    """Steps between renormalizations that keep products far from overflow.

    Bounds the per-step growth by the largest step-matrix norm and allows at
    most ~1e150 of growth between renormalizations.
    """
    lam = abs(lam)
    growth = abs(energy) + lam * vmax + 2.0
    if lam > 0:
        growth = max(growth, lam * math.sqrt((abs(energy) / lam + vmax) ** 2 + 1.0) + 1.0, lam + 1.0 / lam)
    per_step = math.log10(growth)
    if per_step <= 0:
        return MAX_RENORM
    return int(max(1, min(MAX_RENORM, 150 // per_step)))


def as_checkpoints(ns) -> np.ndarray:
    arr = np.asarray(sorted(set(int(n) for n in ns)), dtype=np.intp)
    if arr.size == 0 or arr[0] < 1:
        raise ValueError("checkpoints must be positive")
    return arr
