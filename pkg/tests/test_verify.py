import json
import math

import numpy as np
import pytest

from catlyap import angle as ang
from catlyap import potential as pot
from catlyap import verify
from catlyap.config import RunConfig, z_grid
from catlyap.errors import ResolutionExhausted

SMALL = dict(lambdas=(10.0, 100.0, 1000.0), t_grid=(-1.0, 0.5, 2.0), n=200, samples=64, seed=3)


def test_report_serializes(tmap, vexp):
    rep = verify.check_lemma_disc(vexp, tmap, 100.0, (0.5,), z_grid(5), 4)
    d = json.loads(json.dumps(rep.to_dict()))
    assert set(d) >= {"statement", "passed", "measured_constants", "details", "runtime_seconds"}
    assert d["passed"] is True and len(d["details"]) == 25


def test_passed_is_conjunction(tmap, vexp):
    rep = verify.check_lemma_disc(vexp, tmap, 100.0, (0.5,), z_grid(4), 3)
    assert rep.passed == all(r["ok"] for r in rep.details)


def test_ple_small(tmap, vexp):
    rep = verify.check_theorem_ple(vexp, tmap, **SMALL)
    assert math.isfinite(rep.measured_constants["C0"])
    assert sum(r["case"] == "outside" for r in rep.details) == 6
    for r in rep.details:
        assert r["L"] > r["log_lambda"] - rep.measured_constants["C0"]


def test_ple_negative_control_constant(tmap):
    # constant potential: L = 0 at t = v, so the deficit grows like log lambda
    rep = verify.check_theorem_ple(pot.constant(0.5), tmap, **SMALL)
    assert not rep.passed
    assert rep.measured_constants["C0_spread"] > 4.0


def test_lambda_span_required(tmap, vexp):
    rep = verify.check_theorem_ple(vexp, tmap, (10.0, 20.0), (0.5,), 100, 16, 1)
    assert not rep.passed and any("decades" in r for r in rep.reasons)


@pytest.mark.parametrize("check", ["lemma_lb", "lemma_card", "cor_bm", "remark_monotone", "log_cos_bound"])
def test_inadmissible_potential_rejected(tmap, check):
    v = pot.constant(0.5)
    fns = {
        "lemma_lb": lambda: verify.check_lemma_lb(v, tmap, 100.0, 0.5, 5, 2, 1),
        "lemma_card": lambda: verify.check_lemma_card(v, tmap, 100.0, (0.5,), [0.5], 2),
        "cor_bm": lambda: verify.check_cor_bm(v, tmap, 100.0, (0.5,), [0.5], 2, (0.1,)),
        "remark_monotone": lambda: verify.check_remark_monotone(v, tmap, 100.0, (0.5,), [0.5], 2),
        "log_cos_bound": lambda: verify.check_log_cos_bound(v, tmap, 100.0, 0.5, 0.7, 2),
    }
    rep = fns[check]()
    assert not rep.passed and "inadmissible" in rep.reasons[0]


def test_skip_forces_failure(tmap, vexp, monkeypatch):
    def boom(*a, **k):
        raise ResolutionExhausted("forced")
    monkeypatch.setattr(ang, "refine", boom)
    rep = verify.check_lemma_card(vexp, tmap, 100.0, (0.5,), [0.5], 1)
    assert not rep.passed
    assert all(r.get("skipped") for r in rep.details)
    assert any("skipped" in r for r in rep.reasons)


def test_lemma_card_small(tmap, vexp):
    rep = verify.check_lemma_card(vexp, tmap, 100.0, (-1.0, 0.5, 2.0), z_grid(3), 4)
    assert rep.passed
    assert rep.measured_constants["ratio_max"] < 1.0


def test_lemma_lb_small(tmap, vexp):
    rep = verify.check_lemma_lb(vexp, tmap, 100.0, 0.5, 10, 4, 2)
    assert rep.passed and rep.measured_constants["c_floor"] > 0


def test_polar_small(tmap, vexp):
    rep = verify.check_appendix_polar(vexp, tmap, points=300, seed=4)
    assert rep.passed
    assert -2.5 <= rep.measured_constants["O11_slope"] <= -1.5


def test_reports_reproducible(tmap, vexp):
    a = verify.check_cor_bm(vexp, tmap, 100.0, (0.5,), z_grid(2), 3, (0.1, 0.01)).to_dict()
    b = verify.check_cor_bm(vexp, tmap, 100.0, (0.5,), z_grid(2), 3, (0.1, 0.01), threads=2).to_dict()
    a.pop("runtime_seconds"), b.pop("runtime_seconds")
    assert a == b


def test_near_constant_potential(tmap):
    v = verify.near_constant_potential(tmap)
    assert pot.certify(v, tmap).deriv_floor_measured == pytest.approx(1e-6, rel=1e-9)


def test_run_suite_all_names():
    cfg = RunConfig(lambdas=(10.0, 1000.0), t_grid=(0.5,), n=50, samples=16, z_grid=(0.5, 0.9), n_max=2,
                    disc_n_max=3, lb_points=4, deltas=(0.1,), angle_t=(0.5,))
    reps = verify.run_suites(verify.STATEMENTS, cfg)
    assert [r.statement for r in reps] == list(verify.STATEMENTS)
    with pytest.raises(ValueError):
        verify.run_suite("nope", cfg)
