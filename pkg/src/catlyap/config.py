"""JSON run configuration shared by the CLI and the verification suites."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import potential as pot
from .errors import ConfigError, NotHyperbolic, NotUnimodular
from .torus import HyperbolicToralMap, make_map

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class RunConfig:
    map: tuple[int, int, int, int] = (2, 1, 1, 1)
    potential: dict = field(default_factory=lambda: {"family": "exponential", "normalize": True})
    lambdas: tuple[float, ...] = (10.0, 100.0, 1000.0)
    t_grid: tuple[float, ...] = tuple(np.linspace(-1.0, 2.0, 61).tolist())
    n: int = 1000
    samples: int = 1000
    seed: int = 20240521
    z_grid: tuple[float, ...] = ()
    output: str | None = None
    format: str = "csv"
    estimator: str = "vector_iteration"
    cocycle_kind: str = "raw"
    threads: int | None = None
    # leaf / angle suites
    angle_lambda: float = 100.0
    angle_t: tuple[float, ...] = (-1.0, 0.5, 2.0)
    census_t: float = 0.5
    n_max: int = 10
    disc_n_max: int = 12
    deltas: tuple[float, ...] = (0.3, 0.1, 0.03, 0.01)
    lb_points: int = 100
    # acceptance knobs
    lambda_tolerance: float = 0.5
    lb_factor: float = 3.0
    badset_drift: float = 0.2
    extra_maps: tuple[tuple[int, int, int, int], ...] = ((3, 1, 2, 1),)

    def tmap(self) -> HyperbolicToralMap:
        return make_map(*self.map)

    def build_potential(self) -> pot.Potential:
        return pot.from_config(self.potential)

    def zs(self, default_count: int = 50) -> list[float]:
        return list(self.z_grid) if self.z_grid else z_grid(default_count)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["map"] = list(self.map)
        d["extra_maps"] = [list(m) for m in self.extra_maps]
        return d

    def digest(self) -> str:
        """Hash of the fields that determine results (threads and output path excluded)."""
        d = {k: v for k, v in self.to_dict().items() if k not in ("threads", "output")}
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def z_grid(count: int) -> list[float]:
    """Midpoint grid of ``count`` anchors on (0, sqrt 2)."""
    return [(i + 0.5) * SQRT2 / count for i in range(count)]


def _grid(value, name: str) -> tuple[float, ...]:
    if isinstance(value, dict):
        try:
            lo, hi, cnt = float(value["min"]), float(value["max"]), int(value["count"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{name}: expected {{min, max, count}} ({exc})") from exc
        if cnt < 1:
            raise ConfigError(f"{name}.count must be >= 1")
        return tuple(np.linspace(lo, hi, cnt).tolist())
    if isinstance(value, (list, tuple)):
        try:
            return tuple(float(x) for x in value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{name}: expected a list of numbers") from exc
    raise ConfigError(f"{name}: expected a list or {{min, max, count}}")


def _zs(value) -> tuple[float, ...]:
    if isinstance(value, dict) and set(value) == {"count"}:
        try:
            return tuple(z_grid(int(value["count"])))
        except (TypeError, ValueError) as exc:
            raise ConfigError("z_grid.count must be an integer") from exc
    return _grid(value, "z_grid")


_INT_FIELDS = ("n", "samples", "seed", "n_max", "disc_n_max", "lb_points")
_FLOAT_FIELDS = ("angle_lambda", "census_t", "lambda_tolerance", "lb_factor", "badset_drift")


def from_dict(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise ConfigError("config root must be a JSON object")
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
    kw = {}
    for k, v in d.items():
        if k == "map":
            if not (isinstance(v, (list, tuple)) and len(v) == 4):
                raise ConfigError("map: expected 4 integers")
            kw[k] = tuple(int(x) for x in v)
        elif k == "extra_maps":
            kw[k] = tuple(tuple(int(x) for x in m) for m in v)
        elif k in ("lambdas", "deltas", "angle_t"):
            kw[k] = _grid(v, k)
        elif k == "t_grid":
            kw[k] = _grid(v, k)
        elif k == "z_grid":
            kw[k] = _zs(v)
        elif k in _INT_FIELDS:
            try:
                kw[k] = int(v)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{k}: expected an integer") from exc
        elif k in _FLOAT_FIELDS:
            try:
                kw[k] = float(v)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{k}: expected a number") from exc
        else:
            kw[k] = v
    cfg = RunConfig(**kw)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> RunConfig:
    try:
        cfg.tmap()
        for m in cfg.extra_maps:
            make_map(*m)
    except (NotUnimodular, NotHyperbolic, TypeError) as exc:
        raise ConfigError(f"map: {exc}") from exc
    cfg.build_potential()
    if cfg.n < 1:
        raise ConfigError("n: must be >= 1")
    if cfg.samples < 1:
        raise ConfigError("samples: must be >= 1")
    if not cfg.lambdas or any(not lam > 0 for lam in cfg.lambdas):
        raise ConfigError("lambdas: need at least one positive value")
    if not cfg.t_grid:
        raise ConfigError("t_grid: empty")
    if any(not -1.0 <= t <= 2.0 for t in (*cfg.t_grid, *cfg.angle_t, cfg.census_t)):
        raise ConfigError("t_grid / angle_t / census_t: values must lie in [-1, 2]")
    if not cfg.angle_lambda > 0:
        raise ConfigError("angle_lambda: must be > 0")
    if cfg.threads is not None and int(cfg.threads) < 1:
        raise ConfigError("threads: must be >= 1")
    if any(not 0.0 < z < SQRT2 for z in cfg.z_grid):
        raise ConfigError("z_grid: values must lie in (0, sqrt 2)")
    if not 0 <= cfg.n_max <= 12 or not 0 <= cfg.disc_n_max <= 12:
        raise ConfigError("n_max / disc_n_max: must lie in [0, 12]")
    if any(not 0.0 < d < math.pi / 2 for d in cfg.deltas):
        raise ConfigError("deltas: values must lie in (0, pi/2)")
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format: expected 'csv' or 'json'")
    if cfg.estimator not in ("vector_iteration", "norm_product"):
        raise ConfigError("estimator: expected 'vector_iteration' or 'norm_product'")
    if cfg.cocycle_kind not in ("raw", "conjugated", "reduced", "polar"):
        raise ConfigError("cocycle_kind: expected raw, conjugated, reduced or polar")
    if not 0 <= cfg.seed < 2 ** 64:
        raise ConfigError("seed: must be a 64-bit unsigned integer")
    return cfg


def load(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return from_dict(d)


def override(cfg: RunConfig, **kw) -> RunConfig:
    kw = {k: v for k, v in kw.items() if v is not None}
    return validate(replace(cfg, **kw)) if kw else cfg
