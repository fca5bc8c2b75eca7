"""Schrodinger cocycle matrices, transfer products and their polar factors.

Conventions: ``r = t - v`` with ``t = E / lam``; ``g = r^2 + 1``;
``theta = arccot(r)`` in (0, pi). The conjugated cocycle is ``P A P^-1`` with
``P = diag(lam^-1/2, lam^1/2)``. The reduced cocycle is the large-coupling model
``diag(lam sqrt g(Tp), 1 / (lam sqrt g(Tp))) R_theta(p)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateRotation, OutOfRange
from .potential import Potential
from .torus import HyperbolicToralMap, TorusPoint, apply, orbit_array

T_RANGE = (-1.0, 2.0)
ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class SL2:
    """Real 2x2 matrix (unimodular up to the scale carried alongside it)."""

    m11: float
    m12: float
    m21: float
    m22: float

    @classmethod
    def identity(cls) -> "SL2":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def rotation(cls, gamma: float) -> "SL2":
        c, s = math.cos(gamma), math.sin(gamma)
        return cls(c, -s, s, c)

    @classmethod
    def diag(cls, a: float, d: float) -> "SL2":
        return cls(a, 0.0, 0.0, d)

    @classmethod
    def from_array(cls, m) -> "SL2":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    def array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def T(self) -> "SL2":
        return SL2(self.m11, self.m21, self.m12, self.m22)

    def inverse(self) -> "SL2":
        dt = self.det
        return SL2(self.m22 / dt, -self.m12 / dt, -self.m21 / dt, self.m11 / dt)

    def adjugate(self) -> "SL2":
        return SL2(self.m22, -self.m12, -self.m21, self.m11)

    def norm(self) -> float:
        """Operator (spectral) norm, closed form for 2x2."""
        a, b, c, d = self.m11, self.m12, self.m21, self.m22
        return 0.5 * (math.hypot(a + d, c - b) + math.hypot(a - d, b + c))

    def scale(self, s: float) -> "SL2":
        return SL2(s * self.m11, s * self.m12, s * self.m21, s * self.m22)

    def __matmul__(self, o: "SL2") -> "SL2":
        return SL2(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return self.m11 * x + self.m12 * y, self.m21 * x + self.m22 * y

    def max_abs_diff(self, o: "SL2") -> float:
        return float(np.max(np.abs(self.array() - o.array())))


@dataclass(frozen=True)
class Transfer:
    """A product ``exp(log_scale) * unit`` with ``unit`` of operator norm 1."""

    unit: SL2
    log_scale: float

    @property
    def log_norm(self) -> float:
        return self.log_scale + math.log(self.unit.norm())

    def matrix(self) -> SL2:
        """Dense matrix; overflows for long products."""
        return self.unit.scale(math.exp(self.log_scale))

    def det_residual(self) -> float:
        """``|det - 1|`` relative to the squared norm of the product."""
        return abs(self.unit.det - math.exp(-2.0 * self.log_scale))

    def __matmul__(self, o: "Transfer") -> "Transfer":
        return _normalized(self.unit @ o.unit, self.log_scale + o.log_scale)

    def inverse(self) -> "Transfer":
        # for det(e^L U) = 1 the inverse is the adjugate e^L adj(U), same norm
        return Transfer(self.unit.adjugate(), self.log_scale)

    def relative_diff(self, o: "Transfer") -> float:
        """Componentwise difference after aligning the two log scales."""
        d = o.log_scale - self.log_scale
        return self.unit.max_abs_diff(o.unit.scale(math.exp(d)))


def _normalized(m: SL2, log_scale: float) -> Transfer:
    nr = m.norm()
    return Transfer(m.scale(1.0 / nr), log_scale + math.log(nr))


@dataclass(frozen=True)
class CocycleParams:
    """Coupling ``lam`` and energy ``E``; ``t = E / lam`` is the scaled energy."""

    lam: float
    energy: float

    def __post_init__(self):
        if not (self.lam >= 0 and math.isfinite(self.lam)):
            raise OutOfRange(f"lambda must be finite and >= 0, got {self.lam}")
        if not math.isfinite(self.energy):
            raise OutOfRange("energy must be finite")

    @classmethod
    def scaled(cls, lam: float, t: float) -> "CocycleParams":
        if not lam > 0:
            raise OutOfRange(f"lambda must be > 0, got {lam}")
        if not T_RANGE[0] <= t <= T_RANGE[1]:
            raise OutOfRange(f"t = {t} outside [{T_RANGE[0]}, {T_RANGE[1]}]")
        return cls(float(lam), float(lam) * float(t))

    @property
    def t(self) -> float:
        return self.energy / self.lam if self.lam > 0 else math.nan

    @property
    def log_lambda(self) -> float:
        return math.log(self.lam)


@dataclass(frozen=True)
class PolarFactors:
    alpha_sv: float
    beta_app: float
    f: float
    S1: SL2
    S2: SL2
    O: SL2
    Lambda: SL2
    kappa: float
    O11: float


def r_of(v: Potential, params: CocycleParams, p) -> float:
    return params.t - v.value(p)


def schrodinger_matrix(v: Potential, params: CocycleParams, p: TorusPoint) -> SL2:
    return SL2(params.energy - params.lam * v.value(p), -1.0, 1.0, 0.0)


def conjugate_P(M: SL2, lam: float) -> SL2:
    if not lam > 0:
        raise OutOfRange("lambda must be > 0")
    # P M P^-1 with P = diag(lam^-1/2, lam^1/2)
    return SL2(M.m11, M.m12 / lam, M.m21 * lam, M.m22)


def conjugated_matrix(v: Potential, params: CocycleParams, p: TorusPoint) -> SL2:
    return conjugate_P(schrodinger_matrix(v, params, p), params.lam)


def reduced_matrix(v: Potential, params: CocycleParams, p: TorusPoint, tmap: HyperbolicToralMap) -> SL2:
    if not params.lam > 0:
        raise OutOfRange("lambda must be > 0")
    r0 = r_of(v, params, p)
    r1 = r_of(v, params, apply(tmap, p))
    k = params.lam * math.sqrt(1.0 + r1 * r1)
    return SL2.diag(k, 1.0 / k) @ SL2.rotation(math.atan2(1.0, r0))


def _beta(r: float, lam: float) -> float:
    inv4 = lam ** -4
    base = r * r + 1.0 + inv4
    return base + math.sqrt(base * base - 4.0 * inv4)


def _s2(r: float, lam: float, beta: float) -> tuple[float, SL2]:
    p = beta - 2.0 * lam ** -4
    q = 2.0 * r / lam ** 2
    f = 1.0 / math.hypot(p, q)
    return f, SL2(f * p, f * q, -f * q, f * p)


def polar_factors(v: Potential, params: CocycleParams, p: TorusPoint, tmap: HyperbolicToralMap) -> PolarFactors:
    """Closed-form polar / singular-value factors of the conjugated matrix.

    ``M = S1 S2 Lambda S2^T`` at ``p`` and ``O = S2(Tp)^T S1(p) S2(p)``, so that
    ``Lambda(Tp) O(p) = S(Tp)^-1 M(Tp) S(p)`` with ``S = S1 S2``, and equally
    ``B(Tp)^-1 M(p) B(p)`` with ``B = S2 Lambda^-1``.
    """
    lam = params.lam
    M = conjugated_matrix(v, params, p)
    gram = M.T @ M
    if max(abs(gram.m11 - 1), abs(gram.m12), abs(gram.m22 - 1)) < ORTHO_TOL:
        raise DegenerateRotation("conjugated matrix is orthogonal to within 1e-12")
    q = apply(tmap, p)
    r0 = r_of(v, params, p)
    r1 = r_of(v, params, q)
    b0 = _beta(r0, lam)
    b1 = _beta(r1, lam)
    f0, S2 = _s2(r0, lam, b0)
    f1, S2q = _s2(r1, lam, b1)
    n0 = lam * math.sqrt(b0 / 2.0)
    Lam = SL2.diag(n0, 1.0 / n0)
    S1 = M @ S2 @ Lam.inverse() @ S2.T
    O = S2q.T @ M @ S2 @ Lam.inverse()
    kappa = math.sqrt(2.0 / b0) * b1 * b0 * f1 * f0
    O11 = kappa * (
        r0
        - 2.0 * r0 / (lam ** 4 * b1)
        - 2.0 * r1 / (lam ** 2 * b1)
        + 4.0 * r1 / (lam ** 6 * b1 * b0)
    )
    return PolarFactors(lam * lam * b0 / 2.0, b0, f0, S1, S2, O, Lam, kappa, O11)


def polar_matrix(v: Potential, params: CocycleParams, p: TorusPoint, tmap: HyperbolicToralMap) -> SL2:
    """Exact ``Lambda(Tp) O(p)``, the conjugate of the P-conjugated cocycle."""
    pf = polar_factors(v, params, p, tmap)
    n1 = params.lam * math.sqrt(_beta(r_of(v, params, apply(tmap, p)), params.lam) / 2.0)
    return SL2.diag(n1, 1.0 / n1) @ pf.O


def step_matrix(kind, v: Potential, params: CocycleParams, p: TorusPoint, tmap: HyperbolicToralMap) -> SL2:
    code = kernels.kind_code(kind)
    if code == kernels.RAW:
        return schrodinger_matrix(v, params, p)
    if code == kernels.CONJUGATED:
        return conjugated_matrix(v, params, p)
    if code == kernels.REDUCED:
        return reduced_matrix(v, params, p, tmap)
    return polar_matrix(v, params, p, tmap)


def orbit_values(v: Potential, tmap: HyperbolicToralMap, pts, n: int) -> np.ndarray:
    """``v(T^k p)`` for k = 0..n, shape ``(len(pts), n + 1)``."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    orb = orbit_array(tmap, pts, n)
    return np.ascontiguousarray(np.asarray(v.value(orb), dtype=float).T)


def _backward_start(tmap: HyperbolicToralMap, p: TorusPoint, n: int) -> TorusPoint:
    inv = tmap.inverse()
    for _ in range(n):
        p = apply(inv, p)
    return p


def transfer(v: Potential, params: CocycleParams, tmap: HyperbolicToralMap, p: TorusPoint, n: int,
             kind="raw", backend: str | None = None) -> Transfer:
    """n-step transfer matrix in factored form.

    n > 0: ``A(T^{n-1}p) ... A(p)``; n = 0: identity; n < 0: the inverse of the
    forward product of length ``-n`` started at ``T^n p``.
    """
    if n == 0:
        return Transfer(SL2.identity(), 0.0)
    if n < 0:
        q = _backward_start(tmap, p, -n)
        return transfer(v, params, tmap, q, -n, kind, backend).inverse()
    code = kernels.kind_code(kind)
    if code != kernels.RAW and not params.lam > 0:
        raise OutOfRange("conjugated / reduced / polar cocycles need lambda > 0")
    vals = orbit_values(v, tmap, [p.as_array()], n)[0]
    ker = kernels.get_backend(backend)
    renorm = kernels.renorm_interval(params.lam, params.energy, max(1.0, float(np.max(np.abs(vals)))))
    a, b, c, d, ls = ker.transfer_product(vals, float(params.lam), float(params.energy), code, n, renorm)
    return _normalized(SL2(a, b, c, d), ls)
