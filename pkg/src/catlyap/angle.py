"""Angle dynamics of the reduced cocycle along unstable leaves.

With ``theta(p) = arccot(t - v(p))`` and ``g = (t - v)^2 + 1`` the reduced
cocycle acts on directions by

    phi_n   = arccot(lam^2 g(T^n w) cot theta_{n-1})
    theta_n = phi_n + theta(T^n w),        theta_0 = theta(w),

so ``theta_n`` is the angle of ``R_{theta(T^n w)} A_n(w) e1`` modulo pi. The
lift used here is the canonical continuous one: ``arccot(a^2 cot .)`` is
extended to the real line as an increasing map commuting with ``+ pi``.

Along a leaf, ``v(T^k w)`` jumps where ``T^k`` of the leaf meets the boundary
of the unit square. Between consecutive jumps for all ``k <= n`` (a
"piece") the lift is smooth; one-sided limits at piece ends are evaluated
exactly by freezing the integer cell of each ``T^k`` image at the piece
midpoint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .cocycle import SL2, CocycleParams, reduced_matrix
from .errors import ResolutionExhausted, StraddlesDiscontinuity
from .leaves import Leaf, accumulated_discontinuities, image_affine
from .potential import Potential
from .torus import HyperbolicToralMap, TorusPoint, apply

HALF_PI = 0.5 * math.pi
MAX_GAP = 0.25 * math.pi
MAX_LEVELS = 64
MAX_INTERVALS = 20_000_000
BISECT_TOL = 1e-13
FTOL = 1e-12


@dataclass(frozen=True)
class AngleKernel:
    potential: Potential
    params: CocycleParams

    @property
    def lam(self) -> float:
        return self.params.lam

    @property
    def t(self) -> float:
        return self.params.t

    def r(self, p):
        return self.t - self.potential.value(p)

    def g(self, p):
        r = self.r(p)
        return r * r + 1.0

    def theta(self, p):
        return np.arctan2(1.0, self.r(p))


@dataclass
class AngleOrbit:
    leaf: Leaf
    n: int
    s: np.ndarray
    theta: np.ndarray
    piece: np.ndarray
    branch_jumps: np.ndarray

    def monotone_violations(self) -> int:
        same = self.piece[1:] == self.piece[:-1]
        return int(np.count_nonzero(same & (np.diff(self.theta) <= 0.0)))


@dataclass(frozen=True)
class BadSetEstimate:
    n: int
    z: float
    delta: float
    measure: float
    crossing_count: int


def rp1_distance(x):
    """Distance from ``x`` to the nearest multiple of pi."""
    y = np.mod(x, math.pi)
    return np.minimum(y, math.pi - y)


def lift_arccot(psi, a2):
    """Continuous increasing lift of ``arccot(a2 cot psi)``."""
    k = np.floor(psi / math.pi)
    rem = psi - k * math.pi
    return k * math.pi + np.arctan2(np.sin(rem), a2 * np.cos(rem))


def theta(kernel: AngleKernel, p: TorusPoint) -> float:
    return math.atan2(1.0, kernel.r(p))


def step(kernel: AngleKernel, tmap: HyperbolicToralMap, theta_prev: float, p_next_image: TorusPoint):
    """One recursion step; ``p_next_image`` is ``T^n w``. Returns ``(phi_n, theta_n)``."""
    r = kernel.r(p_next_image)
    phi = float(lift_arccot(theta_prev, kernel.lam ** 2 * (r * r + 1.0)))
    return phi, phi + math.atan2(1.0, r)


# -- continuity pieces ---------------------------------------------------------

@dataclass
class LeafPieces:
    """Continuity structure of ``theta_n`` on one leaf."""

    tmap: HyperbolicToralMap
    leaf: Leaf
    n: int
    cuts: np.ndarray
    x0: np.ndarray = field(repr=False)
    vel: np.ndarray = field(repr=False)
    cell: np.ndarray = field(repr=False)

    @property
    def discontinuities(self) -> np.ndarray:
        return self.cuts[1:-1]

    @property
    def count(self) -> int:
        return len(self.cuts) - 1

    def piece_of(self, s) -> np.ndarray:
        idx = np.searchsorted(self.cuts, s, side="right") - 1
        return np.clip(idx, 0, self.count - 1)

    def points(self, s, idx) -> np.ndarray:
        """Reduced images ``T^k(leaf(s))``, k = 0..n, shape ``(len(s), n + 1, 2)``.

        The lattice cell of each image is taken from the midpoint of the
        piece ``idx`` so that piece endpoints give one-sided limits.
        """
        s = np.asarray(s, dtype=float)
        return (self.x0[None] - self.cell[idx]) + s[:, None, None] * self.vel[None]

    def potential_values(self, v: Potential, s, idx) -> np.ndarray:
        return np.ascontiguousarray(v.value(self.points(s, idx)), dtype=float)


def leaf_pieces(tmap: HyperbolicToralMap, leaf: Leaf, n: int) -> LeafPieces:
    cuts = np.concatenate([[0.0], accumulated_discontinuities(tmap, leaf, n), [leaf.length]])
    aff = [image_affine(tmap, leaf, k) for k in range(n + 1)]
    x0 = np.array([a[0] for a in aff])
    vel = np.array([a[1] for a in aff])
    mid = 0.5 * (cuts[:-1] + cuts[1:])
    cell = np.floor(x0[None] + mid[:, None, None] * vel[None])
    return LeafPieces(tmap, leaf, n, cuts, x0, vel, cell)


def lift_at(kernel: AngleKernel, lp: LeafPieces, s, idx=None, all_steps: bool = False, backend=None):
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if idx is None:
        idx = lp.piece_of(s)
    if s.size == 0:
        return np.empty((0, lp.n + 1)) if all_steps else np.empty(0)
    V = lp.potential_values(kernel.potential, s, idx)
    th = kernels.get_backend(backend).theta_lift(V, float(kernel.lam), float(kernel.t), 1)
    return th if all_steps else th[:, -1]


# -- public operations -----------------------------------------------------------

def orbit_along_leaf(kernel: AngleKernel, tmap: HyperbolicToralMap, leaf: Leaf, n: int,
                     resolution: int) -> AngleOrbit:
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    lp = leaf_pieces(tmap, leaf, n)
    grid = np.arange(resolution) * (leaf.length / resolution)
    s = np.unique(np.concatenate([grid, lp.discontinuities]))
    idx = lp.piece_of(s)
    return AngleOrbit(leaf, n, s, lift_at(kernel, lp, s, idx), idx, lp.discontinuities)


def fd_step(lp: LeafPieces, s: float, h: float | None = None) -> tuple[float, int]:
    i = int(lp.piece_of(s))
    gap = min(s - lp.cuts[i], lp.cuts[i + 1] - s)
    if h is None:
        h = min(1e-6, gap / 4.0)
    if not (h > 0 and s - h >= lp.cuts[i] and s + h < lp.cuts[i + 1]):
        raise StraddlesDiscontinuity(f"stencil [{s - h}, {s + h}] leaves piece [{lp.cuts[i]}, {lp.cuts[i + 1]})")
    return h, i


def directional_derivative_theta(kernel: AngleKernel, tmap: HyperbolicToralMap, leaf: Leaf, s: float, n: int,
                                 h: float | None = None, lp: LeafPieces | None = None) -> float:
    """Central difference of the ``theta_n`` lift along the unnormalized unstable vector."""
    lp = lp or leaf_pieces(tmap, leaf, n)
    h, i = fd_step(lp, s, h)
    th = lift_at(kernel, lp, np.array([s - h, s + h]), np.array([i, i]))
    return float((th[1] - th[0]) / (2.0 * h) * tmap.unstable_norm)


@dataclass
class RefinedLift:
    """Piecewise sampling of the lift with every adjacent gap below ``MAX_GAP``.

    Stored as intervals ``[sl, sr]`` within piece ``idx`` with lift values at
    both ends; the right end of the last interval in a piece is the one-sided
    limit at the piece end. Intervals that cannot be bisected any further in
    double precision but still carry a large gap are flagged ``unresolved``:
    nested critical points make the lift turn through pi inside a single ulp
    of ``s``. Monotonicity makes their crossing count exact regardless.
    """

    lp: LeafPieces
    sl: np.ndarray
    sr: np.ndarray
    tl: np.ndarray
    tr: np.ndarray
    idx: np.ndarray
    unresolved: np.ndarray

    def signed_crossings(self) -> np.ndarray:
        """Net crossings of pi/2 + pi Z per interval (half-open on the left)."""
        a = np.ceil((self.tl - HALF_PI) / math.pi)
        b = np.ceil((self.tr - HALF_PI) / math.pi)
        return (b - a).astype(np.int64)

    def crossings(self) -> np.ndarray:
        return np.abs(self.signed_crossings())

    def census(self) -> int:
        """Crossing count; telescopes to the piece-end lifts since the lift is monotone."""
        return int(self.signed_crossings().sum())

    def monotone_violations(self, tol: float = 1e-9) -> int:
        """Intervals whose lift decreases by more than ``tol`` (relative)."""
        scale = tol * np.maximum(1.0, np.abs(self.tl))
        return int(np.count_nonzero(self.tr < self.tl - scale))

    @property
    def unresolved_count(self) -> int:
        return int(np.count_nonzero(self.unresolved))


def refine(kernel: AngleKernel, lp: LeafPieces, max_gap: float = MAX_GAP, max_levels: int = MAX_LEVELS,
           backend=None) -> RefinedLift:
    """Bisect every interval whose lift gap is ``>= max_gap``."""
    idx = np.arange(lp.count)
    sl = lp.cuts[:-1].copy()
    sr = lp.cuts[1:].copy()
    tl = lift_at(kernel, lp, sl, idx, backend=backend)
    tr = lift_at(kernel, lp, sr, idx, backend=backend)
    done = []
    for _ in range(max_levels):
        bad = np.abs(tr - tl) >= max_gap
        sm = 0.5 * (sl + sr)
        stuck = bad & ((sm <= sl) | (sm >= sr))
        keep = ~bad | stuck
        done.append((sl[keep], sr[keep], tl[keep], tr[keep], idx[keep], stuck[keep]))
        go = bad & ~stuck
        if not go.any():
            break
        if 2 * np.count_nonzero(go) > MAX_INTERVALS:
            raise ResolutionExhausted(f"more than {MAX_INTERVALS} intervals needed")
        sl, sr, tl, tr, idx, sm = sl[go], sr[go], tl[go], tr[go], idx[go], sm[go]
        tm = lift_at(kernel, lp, sm, idx, backend=backend)
        sl, sr = np.concatenate([sl, sm]), np.concatenate([sm, sr])
        tl, tr = np.concatenate([tl, tm]), np.concatenate([tm, tr])
        idx = np.concatenate([idx, idx])
    else:
        raise ResolutionExhausted(f"refinement cap of {max_levels} levels reached")
    parts = [np.concatenate(c) for c in zip(*done)]
    order = np.lexsort((parts[0], parts[4]))
    return RefinedLift(lp, *(p[order] for p in parts))


def critical_bound(tmap: HyperbolicToralMap, n: int) -> float:
    a = tmap.expansion
    return sum(a ** (j + 1) for j in range(n + 3))


def accumulated_disc_bound(tmap: HyperbolicToralMap, n: int) -> float:
    a = tmap.expansion
    return sum(a ** (j + 1) for j in range(n + 2))


def critical_census(kernel: AngleKernel, tmap: HyperbolicToralMap, leaf: Leaf, n: int,
                    refined: RefinedLift | None = None) -> int:
    """Number of leaf points where ``theta_n`` lies in ``pi/2 + pi Z``."""
    rl = refined or refine(kernel, leaf_pieces(tmap, leaf, n))
    return rl.census()


def _invert(kernel, lp, target, sl, sr, tl, tr, idx, backend=None):
    """Solve ``lift(s) = target`` on brackets ``[sl, sr]``.

    Vectorized Illinois false position with a bisection step every third
    iteration, so steep sigmoid-shaped brackets still shrink geometrically.
    """
    lo, hi = sl.astype(float).copy(), sr.astype(float).copy()
    flo = tl - target
    fhi = tr - target
    out = 0.5 * (lo + hi)
    active = np.arange(lo.size)
    side = np.zeros(lo.size, dtype=np.int8)
    for it in range(200):
        if active.size == 0:
            break
        a, b, fa, fb = lo[active], hi[active], flo[active], fhi[active]
        if it % 3 == 2:
            m = 0.5 * (a + b)
        else:
            den = fb - fa
            m = np.where(den != 0, a - fa * (b - a) / np.where(den != 0, den, 1.0), 0.5 * (a + b))
            m = np.where((m > a) & (m < b), m, 0.5 * (a + b))
        fm = lift_at(kernel, lp, m, idx[active], backend=backend) - target[active]
        same_lo = np.sign(fm) == np.sign(fa)
        # replace the endpoint with the same sign; halve the stale one (Illinois)
        lo[active] = np.where(same_lo, m, a)
        flo[active] = np.where(same_lo, fm, np.where(side[active] == 1, 0.5 * fa, fa))
        hi[active] = np.where(same_lo, b, m)
        fhi[active] = np.where(same_lo, np.where(side[active] == -1, 0.5 * fb, fb), fm)
        side[active] = np.where(same_lo, -1, 1)
        out[active] = m
        done = (np.abs(fm) <= FTOL) | (hi[active] - lo[active] < BISECT_TOL)
        active = active[~done]
    return out


def bad_set_measure(kernel: AngleKernel, tmap: HyperbolicToralMap, leaf: Leaf, n: int, delta: float,
                    refined: RefinedLift | None = None) -> BadSetEstimate:
    """Arclength of ``{s : dist(theta_n(s), pi/2 + pi Z) < delta}``."""
    if not 0.0 < delta < HALF_PI:
        raise ValueError("delta must lie in (0, pi/2)")
    rl = refined or refine(kernel, leaf_pieces(tmap, leaf, n))
    lo_t = np.minimum(rl.tl, rl.tr)
    hi_t = np.maximum(rl.tl, rl.tr)
    total = 0.0
    # an interval spans < pi/4 so it meets at most two delta-windows
    m0 = np.floor((lo_t - HALF_PI + delta) / math.pi)
    for m in (m0, m0 + 1):
        c = HALF_PI + m * math.pi
        a = np.maximum(lo_t, c - delta)
        b = np.minimum(hi_t, c + delta)
        hit = a < b
        if not hit.any():
            continue
        sl, sr, tl, tr, idx = rl.sl[hit], rl.sr[hit], rl.tl[hit], rl.tr[hit], rl.idx[hit]
        a, b = a[hit], b[hit]
        inc = tr >= tl
        # parameters where the lift equals a and b; interval ends are exact
        sa_end = np.where(inc, sl, sr)
        sb_end = np.where(inc, sr, sl)
        need_a = a > np.minimum(tl, tr)
        need_b = b < np.maximum(tl, tr)
        sa = sa_end.copy()
        sb = sb_end.copy()
        if need_a.any():
            k = need_a
            sa[k] = _invert(kernel, rl.lp, a[k], sl[k], sr[k], tl[k], tr[k], idx[k])
        if need_b.any():
            k = need_b
            sb[k] = _invert(kernel, rl.lp, b[k], sl[k], sr[k], tl[k], tr[k], idx[k])
        total += float(np.abs(sb - sa).sum())
    return BadSetEstimate(n, leaf.z, float(delta), min(total, leaf.length), critical_census(kernel, tmap, leaf, n, rl))


def crossing_slopes(kernel: AngleKernel, rl: RefinedLift) -> tuple[np.ndarray, np.ndarray]:
    """Locations of the pi/2 + pi Z crossings and the lift slope (per arclength) there."""
    k = rl.crossings() > 0
    lo_t = np.minimum(rl.tl[k], rl.tr[k])
    c = HALF_PI + np.ceil((lo_t - HALF_PI) / math.pi) * math.pi
    sc = _invert(kernel, rl.lp, c, rl.sl[k], rl.sr[k], rl.tl[k], rl.tr[k], rl.idx[k])
    width = rl.sr[k] - rl.sl[k]
    h = np.minimum(np.minimum(sc - rl.lp.cuts[rl.idx[k]], rl.lp.cuts[rl.idx[k] + 1] - sc) / 4.0, 1e-3 * width)
    h = np.maximum(h, 1e-14)
    up = lift_at(kernel, rl.lp, sc + h, rl.idx[k])
    dn = lift_at(kernel, rl.lp, sc - h, rl.idx[k])
    return sc, (up - dn) / (2.0 * h)


# -- matrix ground truth -------------------------------------------------------------

def recursion_angles(kernel: AngleKernel, tmap: HyperbolicToralMap, p: TorusPoint, n: int) -> np.ndarray:
    """``theta_0 .. theta_n`` at one torus point by the scalar recursion."""
    out = np.empty(n + 1)
    out[0] = theta(kernel, p)
    q = p
    for k in range(1, n + 1):
        q = apply(tmap, q)
        out[k] = step(kernel, tmap, out[k - 1], q)[1]
    return out


def projective_angles(kernel: AngleKernel, tmap: HyperbolicToralMap, p: TorusPoint, n: int) -> np.ndarray:
    """Angles mod pi of ``R_theta(T^k p) A_k(p) e1`` with ``A_k`` the reduced transfer matrix."""
    out = np.empty(n + 1)
    x, y = 1.0, 0.0
    q = p
    for k in range(n + 1):
        rot = SL2.rotation(theta(kernel, q))
        out[k] = math.atan2(*reversed(rot.apply(x, y))) % math.pi
        if k == n:
            break
        x, y = reduced_matrix(kernel.potential, kernel.params, q, tmap).apply(x, y)
        nr = math.hypot(x, y)
        x, y = x / nr, y / nr
        q = apply(tmap, q)
    return out
