"""Command-line front end: parameter scans, leaf census, verification suites."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from . import angle as ang
from . import leaves as lv
from . import potential as pot
from . import verify
from .cocycle import CocycleParams
from .config import RunConfig, load, override
from .errors import CatlyapError, ConfigError, NotMonotoneAlongUnstable, ResolutionExhausted
from .lyapunov import default_threads

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

SCAN_COLUMNS = ("lambda", "t", "energy", "n", "samples", "estimator", "L", "stderr", "log_lambda", "deficit")
CENSUS_COLUMNS = ("z", "n", "crossings", "disc_bound", "critical", "critical_bound", "badset_delta",
                  "badset_measure")


def fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def provenance(cfg: RunConfig) -> dict:
    return {"artifact": "catlyap", "version": __version__, "config_hash": cfg.digest(), "seed": cfg.seed}


def _csv_text(cfg: RunConfig, columns, rows) -> str:
    buf = io.StringIO()
    prov = provenance(cfg)
    buf.write(f"# catlyap {prov['version']} config_hash={prov['config_hash']} seed={prov['seed']}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_scan(cfg: RunConfig) -> int:
    rows = verify.scan_rows(cfg.build_potential(), cfg.tmap(), cfg.lambdas, cfg.t_grid, cfg.n, cfg.samples,
                            cfg.seed, cfg.estimator, cfg.cocycle_kind, threads=cfg.threads)
    _emit(_csv_text(cfg, SCAN_COLUMNS, rows), cfg.output)
    return EXIT_OK


def census_rows(cfg: RunConfig) -> list[dict]:
    v, tmap = cfg.build_potential(), cfg.tmap()
    kernel = ang.AngleKernel(v, CocycleParams.scaled(cfg.angle_lambda, cfg.census_t))
    rows = []
    for z in cfg.zs(50):
        leaf = lv.leaf_from_z(z, tmap)
        for n in range(cfg.n_max + 1):
            base = {"z": float(z), "n": n, "crossings": lv.image_crossings(tmap, leaf, n).count,
                    "disc_bound": lv.disc_bound(tmap, n), "critical_bound": ang.critical_bound(tmap, n)}
            try:
                rl = ang.refine(kernel, ang.leaf_pieces(tmap, leaf, n))
            except ResolutionExhausted:
                rows += [{**base, "critical": "skip", "badset_delta": d, "badset_measure": "skip"}
                         for d in cfg.deltas]
                continue
            crit = rl.census()
            for d in cfg.deltas:
                m = ang.bad_set_measure(kernel, tmap, leaf, n, d, rl).measure
                rows.append({**base, "critical": crit, "badset_delta": float(d), "badset_measure": m})
    return rows


def cmd_leaf_census(cfg: RunConfig) -> int:
    _emit(_csv_text(cfg, CENSUS_COLUMNS, census_rows(cfg)), cfg.output)
    return EXIT_OK


def _suites(selector: str) -> list[str]:
    if selector == "all":
        return list(verify.STATEMENTS)
    names = [s.strip() for s in selector.split(",") if s.strip()]
    bad = [s for s in names if s not in verify.STATEMENTS]
    if bad or not names:
        raise ConfigError(f"--suite: unknown statement(s) {', '.join(bad) or selector!r}; "
                          f"choose from all, {', '.join(verify.STATEMENTS)}")
    return names


def cmd_verify(cfg: RunConfig, selector: str) -> int:
    names = _suites(selector)
    prov = provenance(cfg)
    reports = []
    for name in names:
        rep = verify.run_suite(name, cfg)
        print(f"{name}: {'PASS' if rep.passed else 'FAIL'}", file=sys.stderr)
        reports.append({**rep.to_dict(), "provenance": prov})
    _emit(json.dumps(reports, indent=2) + "\n", cfg.output)
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_FAIL


def cmd_certify(cfg: RunConfig) -> int:
    v, tmap = cfg.build_potential(), cfg.tmap()
    out = {"potential": v.to_dict(), "map": list(cfg.map), "provenance": provenance(cfg)}
    try:
        c = pot.certify(v, tmap)
    except NotMonotoneAlongUnstable as exc:
        out.update(admissible=False, reason=str(exc))
        code = EXIT_FAIL
    else:
        out.update(admissible=c.sup_norm_measured <= 1.0 + 1e-12, sup_norm=c.sup_norm_measured,
                   deriv_floor=c.deriv_floor_measured, argmin=list(c.argmin), grid=c.grid)
        code = EXIT_OK if out["admissible"] else EXIT_FAIL
        if not out["admissible"]:
            out["reason"] = f"sup norm {c.sup_norm_measured:.6g} exceeds 1"
    out = {k: (fmt(x) if isinstance(x, float) and not math.isfinite(x) else x) for k, x in out.items()}
    _emit(json.dumps(out, indent=2) + "\n", cfg.output)
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--seed", type=int, help="override the configured seed")
    common.add_argument("--threads", type=int, help="worker threads (default: $CATLYAP_THREADS or CPU count)")
    common.add_argument("--out", help="output path ('-' for stdout)")
    common.add_argument("--lambda", dest="lam", type=float, action="append",
                        help="coupling; repeat for several values")
    common.add_argument("--n", type=int, help="iteration count (scan) or n_max (census)")
    common.add_argument("--samples", type=int, help="phase samples per estimate")
    p = argparse.ArgumentParser(prog="catlyap", description=__doc__)
    p.add_argument("--version", action="version", version=f"catlyap {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("scan", parents=[common], help="Lyapunov exponent over the lambda x t grid (CSV)")
    sub.add_parser("leaf-census", parents=[common], help="crossing, critical and bad-set census (CSV)")
    pv = sub.add_parser("verify", parents=[common], help="run verification suites (JSON)")
    pv.add_argument("--suite", default="all", help="'all' or comma-separated statement names")
    sub.add_parser("certify-potential", parents=[common], help="admissibility certificate (JSON)")
    return p


def _config(args) -> RunConfig:
    cfg = load(args.config) if args.config else RunConfig()
    kw = {"seed": args.seed, "output": args.out, "samples": args.samples,
          "threads": args.threads or cfg.threads or default_threads()}
    if args.lam:
        kw["lambdas"] = tuple(args.lam)
        kw["angle_lambda"] = float(args.lam[0])
    if args.n is not None:
        kw["n_max" if args.command == "leaf-census" else "n"] = args.n
    return override(cfg, **kw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "scan":
            return cmd_scan(cfg)
        if args.command == "leaf-census":
            return cmd_leaf_census(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite)
        return cmd_certify(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CatlyapError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
