"""Hyperbolic toral automorphisms on the 2-torus R^2/Z^2."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NotHyperbolic, NotUnimodular


def frac(x: float) -> float:
    """Representative of ``x`` in the half-open interval [0, 1)."""
    y = x - math.floor(x)
    # tiny negative inputs round up to exactly 1.0
    return 0.0 if y >= 1.0 else y


def frac_array(x):
    y = np.asarray(x, dtype=float)
    y = y - np.floor(y)
    return np.where(y >= 1.0, 0.0, y)


@dataclass(frozen=True)
class TorusPoint:
    w1: float
    w2: float

    def __post_init__(self):
        object.__setattr__(self, "w1", frac(float(self.w1)))
        object.__setattr__(self, "w2", frac(float(self.w2)))

    def as_array(self) -> np.ndarray:
        return np.array([self.w1, self.w2])

    def __iter__(self):
        yield self.w1
        yield self.w2


@dataclass(frozen=True)
class HyperbolicToralMap:
    """Integer matrix ``[[a, b], [c, d]]`` in SL(2, Z) with ``|a + d| > 2``.

    ``eigenvalue`` is the dominant (signed) eigenvalue and ``expansion`` its
    absolute value. ``unstable`` is the matching eigenvector scaled so that
    its second component is exactly 1; it is deliberately *not* a unit vector,
    since directional derivatives along the unstable direction are taken with
    respect to this vector.
    """

    a: int
    b: int
    c: int
    d: int
    eigenvalue: float = field(init=False)
    expansion: float = field(init=False)
    unstable: tuple[float, float] = field(init=False)

    def __post_init__(self):
        a, b, c, d = (int(x) for x in (self.a, self.b, self.c, self.d))
        if a * d - b * c != 1:
            raise NotUnimodular(f"det [[{a}, {b}], [{c}, {d}]] = {a * d - b * c}, expected 1")
        tr = a + d
        if abs(tr) <= 2:
            raise NotHyperbolic(f"|trace| = {abs(tr)} <= 2")
        disc = math.sqrt(tr * tr - 4)
        lam = (tr + disc) / 2 if tr > 0 else (tr - disc) / 2
        # pick the better-conditioned row of (M - lam I) u = 0 with u2 = 1
        if abs(lam - a) >= abs(c):
            u1 = b / (lam - a)
        else:
            u1 = (lam - d) / c
        for name, val in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, val)
        object.__setattr__(self, "eigenvalue", lam)
        object.__setattr__(self, "expansion", abs(lam))
        object.__setattr__(self, "unstable", (u1, 1.0))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.int64)

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def contraction(self) -> float:
        return 1.0 / self.eigenvalue

    @property
    def unstable_unit(self) -> np.ndarray:
        u = np.array(self.unstable)
        return u / np.hypot(*u)

    @property
    def unstable_norm(self) -> float:
        return math.hypot(*self.unstable)

    def inverse(self) -> "HyperbolicToralMap":
        return HyperbolicToralMap(self.d, -self.b, -self.c, self.a)

    def power(self, k: int) -> tuple[int, int, int, int]:
        """Entries of the k-th matrix power (k >= 0), in exact integers."""
        if k < 0:
            return self.inverse().power(-k)
        r = (1, 0, 0, 1)
        m = (self.a, self.b, self.c, self.d)
        while k:
            if k & 1:
                r = _mul(r, m)
            m = _mul(m, m)
            k >>= 1
        return r

    def as_list(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]


def _mul(p, q):
    return (
        p[0] * q[0] + p[1] * q[2],
        p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2],
        p[2] * q[1] + p[3] * q[3],
    )


def cat_map() -> HyperbolicToralMap:
    return HyperbolicToralMap(2, 1, 1, 1)


def make_map(a: int, b: int, c: int, d: int) -> HyperbolicToralMap:
    return HyperbolicToralMap(a, b, c, d)


def apply(tmap: HyperbolicToralMap, p: TorusPoint) -> TorusPoint:
    x, y = p.w1, p.w2
    return TorusPoint(tmap.a * x + tmap.b * y, tmap.c * x + tmap.d * y)


def apply_exact(tmap: HyperbolicToralMap, p: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    x, y = Fraction(p[0]), Fraction(p[1])
    u = tmap.a * x + tmap.b * y
    v = tmap.c * x + tmap.d * y
    return u - math.floor(u), v - math.floor(v)


def orbit(tmap: HyperbolicToralMap, p: TorusPoint, n: int) -> list[TorusPoint]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = [p]
    for _ in range(n):
        p = apply(tmap, p)
        out.append(p)
    return out


def apply_array(tmap: HyperbolicToralMap, pts: np.ndarray) -> np.ndarray:
    """Vectorized :func:`apply` on an ``(..., 2)`` array of points."""
    x = pts[..., 0]
    y = pts[..., 1]
    out = np.empty_like(pts, dtype=float)
    out[..., 0] = frac_array(tmap.a * x + tmap.b * y)
    out[..., 1] = frac_array(tmap.c * x + tmap.d * y)
    return out


def orbit_array(tmap: HyperbolicToralMap, pts: np.ndarray, n: int) -> np.ndarray:
    """Orbits of many points at once; result has shape ``(n + 1,) + pts.shape``."""
    pts = frac_array(pts)
    out = np.empty((n + 1,) + pts.shape)
    out[0] = pts
    for k in range(n):
        out[k + 1] = apply_array(tmap, out[k])
    return out
