"""Local unstable leaves of a hyperbolic toral map inside [0, 1)^2.

A leaf is the maximal unstable segment through a point of the anti-diagonal
``w1 + w2 = 1``, parametrized by arclength ``s`` from its included starting
point on the boundary. ``z`` is the arclength of the anchor along the
anti-diagonal measured from (0, 1).

Images under ``T^n`` are tracked without reduction mod 1: the image of the
leaf is the affine segment ``M^n start + s * eig^n * u_hat`` in R^2, so the
parameters where it meets the integer lattice lines are exact roots of linear
equations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .torus import HyperbolicToralMap, TorusPoint, cat_map, frac_array

SQRT2 = math.sqrt(2.0)
EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Leaf:
    z: float
    anchor: TorusPoint
    start: TorusPoint
    length: float
    direction: tuple[float, float]
    s_star: float

    def point_array(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.empty(s.shape + (2,))
        out[..., 0] = self.start.w1 + s * self.direction[0]
        out[..., 1] = self.start.w2 + s * self.direction[1]
        return out


@dataclass(frozen=True)
class CrossingCensus:
    n: int
    z: float
    crossings: np.ndarray
    count: int


@dataclass(frozen=True)
class Piece:
    """``[s_lo, s_hi)`` maps onto ``[offset, offset + eig^n (s_hi - s_lo))`` of ``target``."""

    s_lo: float
    s_hi: float
    target: Leaf
    offset: float
    target_hi: float

    @property
    def image_length(self) -> float:
        return self.target_hi - self.offset


def _check_map(tmap: HyperbolicToralMap) -> np.ndarray:
    u = tmap.unstable_unit
    if not (u[0] > 0 and u[1] > 0) or tmap.eigenvalue < 0:
        raise OutOfRange("leaf geometry needs a positive expanding eigenvalue with a positive-slope eigenvector")
    return u


def leaf_from_z(z: float, tmap: HyperbolicToralMap | None = None) -> Leaf:
    tmap = tmap or cat_map()
    if not 0.0 < z < SQRT2:
        raise OutOfRange(f"z = {z} outside (0, sqrt 2)")
    u = _check_map(tmap)
    ax = z / SQRT2
    ay = 1.0 - ax
    tb = min(ax / u[0], ay / u[1])
    tf = min((1.0 - ax) / u[0], (1.0 - ay) / u[1])
    sx = max(ax - tb * u[0], 0.0)
    sy = max(ay - tb * u[1], 0.0)
    return Leaf(float(z), TorusPoint(ax, ay), TorusPoint(sx, sy), float(tb + tf),
                (float(u[0]), float(u[1])), float(tb))


def leaf_point(leaf: Leaf, s: float) -> TorusPoint:
    if not 0.0 <= s < leaf.length:
        raise OutOfRange(f"s = {s} outside [0, {leaf.length})")
    return TorusPoint(leaf.start.w1 + s * leaf.direction[0], leaf.start.w2 + s * leaf.direction[1])


def leaf_of_point(p: TorusPoint, tmap: HyperbolicToralMap | None = None) -> tuple[Leaf, float]:
    tmap = tmap or cat_map()
    u = _check_map(tmap)
    tau = (1.0 - p.w1 - p.w2) / (u[0] + u[1])
    ax = p.w1 + tau * u[0]
    z = min(max(ax * SQRT2, np.nextafter(0.0, 1.0)), np.nextafter(SQRT2, 0.0))
    leaf = leaf_from_z(z, tmap)
    return leaf, float(max(leaf.s_star - tau, 0.0))


def fubini_jacobian(tmap: HyperbolicToralMap | None = None) -> float:
    """Area element of the (z, s) leaf coordinates: dA = J dz ds."""
    u = _check_map(tmap or cat_map())
    return float((u[0] + u[1]) / SQRT2)


def image_affine(tmap: HyperbolicToralMap, leaf: Leaf, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Base point and velocity of the unreduced image path ``s -> T^k(leaf(s))``."""
    a, b, c, d = tmap.power(k)
    x0 = np.array([a * leaf.start.w1 + b * leaf.start.w2, c * leaf.start.w1 + d * leaf.start.w2])
    vel = tmap.eigenvalue ** k * np.asarray(leaf.direction)
    return x0, vel


def _lattice_hits(x0: float, vel: float, length: float) -> np.ndarray:
    # s in (0, length) with x0 + s * vel an integer
    if vel == 0.0:
        return np.empty(0)
    lo, hi = sorted((x0, x0 + vel * length))
    ks = np.arange(math.floor(lo), math.ceil(hi) + 1, dtype=float)
    s = (ks - x0) / vel
    return s[(s > 0.0) & (s < length)]


def _merge(s: np.ndarray, tol: float) -> np.ndarray:
    s = np.sort(s)
    if s.size > 1:
        s = s[np.concatenate([[True], np.diff(s) > tol])]
    return s


def _rounding_tol(tmap: HyperbolicToralMap, leaf: Leaf, n: int) -> float:
    # error of (k - x0) / vel in float; genuine crossings near a lattice corner can be
    # far closer than any fixed tolerance, so only rounding-level ties are merged
    if n == 0:
        return 0.0
    x0, vel = image_affine(tmap, leaf, n)
    span = np.abs(x0) + np.abs(vel) * leaf.length + 1.0
    return float(16.0 * EPS * np.max(span / np.abs(vel)))


def crossing_params(tmap: HyperbolicToralMap, leaf: Leaf, n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return np.empty(0)
    x0, vel = image_affine(tmap, leaf, n)
    s = np.concatenate([_lattice_hits(x0[i], vel[i], leaf.length) for i in range(2)])
    return _merge(s, _rounding_tol(tmap, leaf, n))


def image_crossings(tmap: HyperbolicToralMap, leaf: Leaf, n: int) -> CrossingCensus:
    """Cut positions (rounding-level ties merged) and the count of lattice lines crossed.

    Two lines can only be crossed at the same point at a lattice corner, which an
    interior leaf point never maps to, so the count keeps hits that tie in float.
    """
    s = crossing_params(tmap, leaf, n)
    if n == 0:
        return CrossingCensus(n, leaf.z, s, 0)
    x0, vel = image_affine(tmap, leaf, n)
    count = sum(_lattice_hits(x0[i], vel[i], leaf.length).size for i in range(2))
    return CrossingCensus(n, leaf.z, s, int(count))


def disc_bound(tmap: HyperbolicToralMap, n: int) -> float:
    return tmap.expansion ** (n + 2)


def accumulated_discontinuities(tmap: HyperbolicToralMap, leaf: Leaf, n: int) -> np.ndarray:
    """Sorted union of crossings for every ``k <= n``."""
    parts = [crossing_params(tmap, leaf, k) for k in range(n + 1)]
    return _merge(np.concatenate(parts), max(_rounding_tol(tmap, leaf, k) for k in range(n + 1)))


def image_decomposition(tmap: HyperbolicToralMap, leaf: Leaf, n: int) -> list[Piece]:
    cuts = np.concatenate([[0.0], crossing_params(tmap, leaf, n), [leaf.length]])
    x0, vel = image_affine(tmap, leaf, n)
    stretch = tmap.expansion ** n
    out = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (lo + hi)
        q = frac_array(x0 + mid * vel)
        target, s_mid = leaf_of_point(TorusPoint(q[0], q[1]), tmap)
        off = s_mid - stretch * (mid - lo)
        out.append(Piece(float(lo), float(hi), target, float(off), float(off + stretch * (hi - lo))))
    return out
