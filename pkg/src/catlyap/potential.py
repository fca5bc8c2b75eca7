"""Admissible potentials on the fundamental domain [0, 1)^2.

A potential is admissible when it is C^1 on the open square and its
derivative along the unstable vector of the base map is bounded below by a
positive constant. Built-in families have closed-form values, gradients,
sup-norm bounds and derivative floors; the ``custom`` family takes either a
callable or a bivariate coefficient table and falls back to finite
differences for the gradient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, NotMonotoneAlongUnstable
from .torus import HyperbolicToralMap, TorusPoint, cat_map

FAMILIES = ("polynomial", "exponential", "logarithm", "custom")
FD_STEP = 1e-6


@dataclass(frozen=True)
class Certificate:
    sup_norm_measured: float
    deriv_floor_measured: float
    grid: int
    argmin: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class Potential:
    family: str
    params: dict = field(default_factory=dict)
    scale: float = 1.0
    func: Optional[Callable] = field(default=None, compare=False, repr=False)
    grad: Optional[Callable] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown potential family {self.family!r}")
        if self.family == "custom" and self.func is None:
            table = self.params.get("table")
            if table is None:
                raise ValueError("custom potential needs a callable or a coefficient 'table'")
            object.__setattr__(self, "func", _table_func(np.asarray(table, dtype=float)))

    # -- evaluation on raw coordinate arrays -------------------------------
    def _value(self, w1, w2):
        fam = self.family
        if fam == "polynomial":
            out = _poly(self.params["a"], w1) + _poly(self.params["b"], w2)
        elif fam == "exponential":
            out = np.exp(w1 + w2)
        elif fam == "logarithm":
            out = np.log1p(w1 + w2)
        else:
            out = self.func(w1, w2)
        return self.scale * out

    def _gradient(self, w1, w2):
        fam = self.family
        if fam == "polynomial":
            g1 = _dpoly(self.params["a"], w1)
            g2 = _dpoly(self.params["b"], w2)
        elif fam == "exponential":
            g1 = g2 = np.exp(w1 + w2)
        elif fam == "logarithm":
            g1 = g2 = 1.0 / (1.0 + w1 + w2)
        elif self.grad is not None:
            g1, g2 = self.grad(w1, w2)
        else:
            return _fd_gradient(self._value, w1, w2)
        return self.scale * np.asarray(g1, dtype=float), self.scale * np.asarray(g2, dtype=float)

    # -- public API --------------------------------------------------------
    def value(self, p):
        """Value at a :class:`TorusPoint` (returns float) or an ``(..., 2)`` array."""
        if isinstance(p, TorusPoint):
            return float(self._value(p.w1, p.w2))
        p = np.asarray(p, dtype=float)
        return self._value(p[..., 0], p[..., 1])

    def gradient(self, p):
        if isinstance(p, TorusPoint):
            g1, g2 = self._gradient(p.w1, p.w2)
            return np.array([float(g1), float(g2)])
        p = np.asarray(p, dtype=float)
        g1, g2 = self._gradient(p[..., 0], p[..., 1])
        return np.stack(np.broadcast_arrays(g1, g2), axis=-1)

    @property
    def sup_norm(self) -> float:
        """Certified upper bound on ``|v|`` over the square (inf when unknown)."""
        fam = self.family
        if fam == "polynomial":
            base = sum(abs(x) for x in self.params["a"]) + sum(abs(x) for x in self.params["b"])
        elif fam == "exponential":
            base = math.e ** 2
        elif fam == "logarithm":
            base = math.log(3.0)
        elif "table" in self.params:
            base = float(np.abs(np.asarray(self.params["table"], dtype=float)).sum())
        elif "sup_norm" in self.params:
            base = float(self.params["sup_norm"])
        else:
            return math.inf
        return abs(self.scale) * base

    def deriv_floor(self, tmap: HyperbolicToralMap | None = None) -> Optional[float]:
        """Certified lower bound on the unstable directional derivative.

        Returns ``None`` for custom potentials, which have to go through
        :func:`certify`.
        """
        u1, u2 = (tmap or cat_map()).unstable
        fam = self.family
        if fam == "polynomial":
            lo = 0.0
            for u, coef in ((u1, self.params["a"]), (u2, self.params["b"])):
                for k, ck in enumerate(coef):
                    if k == 0:
                        continue
                    term = self.scale * u * k * ck
                    lo += term if k == 1 else min(0.0, term)
            return lo
        if fam in ("exponential", "logarithm"):
            coef = self.scale * (u1 + u2)
            lo_factor, hi_factor = (1.0, math.e ** 2) if fam == "exponential" else (1.0 / 3.0, 1.0)
            return coef * (lo_factor if coef > 0 else hi_factor)
        return None

    def to_dict(self) -> dict:
        d = {"family": self.family, "scale": self.scale}
        d.update({k: v for k, v in self.params.items()})
        return d


def _poly(coef, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for ck in reversed(list(coef)):
        out = out * x + ck
    return out


def _dpoly(coef, x):
    coef = list(coef)
    if len(coef) <= 1:
        return np.zeros_like(np.asarray(x, dtype=float))
    return _poly([k * ck for k, ck in enumerate(coef)][1:], x)


def _table_func(table: np.ndarray):
    def f(w1, w2):
        return np.polynomial.polynomial.polyval2d(w1, w2, table)

    return f


def _fd_gradient(f, w1, w2, h=FD_STEP):
    # shift the stencil centre so both nodes stay inside [0, 1)
    c1 = np.clip(w1, h, 1.0 - 2 * h)
    c2 = np.clip(w2, h, 1.0 - 2 * h)
    g1 = (f(c1 + h, c2) - f(c1 - h, c2)) / (2 * h)
    g2 = (f(c1, c2 + h) - f(c1, c2 - h)) / (2 * h)
    return np.asarray(g1, dtype=float), np.asarray(g2, dtype=float)


# -- constructors ------------------------------------------------------------

def polynomial(a, b, scale: float = 1.0) -> Potential:
    return Potential("polynomial", {"a": tuple(float(x) for x in a), "b": tuple(float(x) for x in b)}, scale)


def exponential(normalized: bool = False) -> Potential:
    p = Potential("exponential")
    return normalize(p) if normalized else p


def logarithm(normalized: bool = False) -> Potential:
    p = Potential("logarithm")
    return normalize(p) if normalized else p


def custom(func: Callable, grad: Callable | None = None, sup_norm: float | None = None) -> Potential:
    params = {} if sup_norm is None else {"sup_norm": float(sup_norm)}
    return Potential("custom", params, 1.0, func=func, grad=grad)


def constant(value: float) -> Potential:
    return polynomial([value], [0.0])


def from_config(block: dict) -> Potential:
    """Build a potential from a JSON config block such as
    ``{"family": "exponential", "normalize": true}``."""
    if not isinstance(block, dict) or "family" not in block:
        raise ConfigError("potential: expected an object with a 'family' field")
    fam = block["family"]
    try:
        if fam == "polynomial":
            pot = polynomial(block.get("a", [0.0]), block.get("b", [0.0]))
        elif fam == "exponential":
            pot = exponential()
        elif fam == "logarithm":
            pot = logarithm()
        elif fam == "custom":
            pot = Potential("custom", {"table": [list(map(float, row)) for row in block["table"]]})
        else:
            raise ConfigError(f"potential.family: unknown family {fam!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"potential: {exc}") from exc
    if "scale" in block:
        pot = replace(pot, scale=float(block["scale"]))
    if block.get("normalize", False):
        pot = normalize(pot)
    return pot


# -- operations --------------------------------------------------------------

def value(v: Potential, p):
    return v.value(p)


def gradient(v: Potential, p):
    return v.gradient(p)


def directional_derivative_u(v: Potential, tmap: HyperbolicToralMap, p):
    """Gradient dotted with the (unnormalized) unstable vector."""
    return v.gradient(p) @ np.asarray(tmap.unstable)


def normalize(v: Potential) -> Potential:
    s = v.sup_norm
    if not math.isfinite(s):
        raise ValueError("cannot normalize a potential without a finite sup-norm bound")
    if s <= 1.0:
        return v
    return replace(v, scale=v.scale / s)


def certify(v: Potential, tmap: HyperbolicToralMap, grid: int = 128) -> Certificate:
    """Grid scan of ``|v|`` and the unstable derivative over ``{i/grid}^2``."""
    if grid < 2:
        raise ValueError("grid must be >= 2")
    x = np.arange(grid) / grid
    w1, w2 = np.meshgrid(x, x, indexing="ij")
    pts = np.stack([w1, w2], axis=-1)
    vals = np.abs(v.value(pts))
    du = directional_derivative_u(v, tmap, pts)
    k = np.unravel_index(np.argmin(du), du.shape)
    floor = float(du[k])
    if not floor > 0:
        raise NotMonotoneAlongUnstable(
            f"measured unstable derivative floor {floor:.3g} <= 0 at {(float(x[k[0]]), float(x[k[1]]))}"
        )
    return Certificate(float(vals.max()), floor, grid, (float(x[k[0]]), float(x[k[1]])))
