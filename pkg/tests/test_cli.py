import csv
import io
import json
import math

import pytest

from catlyap import cli
from catlyap.config import RunConfig, from_dict, load
from catlyap.errors import ConfigError


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def _rows(path):
    lines = [ln for ln in open(path) if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("".join(lines))))


SCAN = {"lambdas": [10, 100, 1000], "t_grid": {"min": -1, "max": 2, "count": 61}, "n": 20, "samples": 8}


def test_scan_grid_and_columns(tmp_path):
    cfg = _write(tmp_path, "c.json", SCAN)
    out = str(tmp_path / "scan.csv")
    assert cli.main(["scan", "--config", cfg, "--out", out, "--threads", "1"]) == 0
    head = open(out).readline()
    assert head.startswith("# catlyap") and "config_hash=" in head and "seed=" in head
    rows = _rows(out)
    assert len(rows) == 183
    assert list(rows[0]) == list(cli.SCAN_COLUMNS)
    for r in rows:
        assert float(r["deficit"]) == float(r["log_lambda"]) - float(r["L"])


def test_scan_seventeen_digits():
    assert cli.fmt(0.1) == "0.10000000000000001"
    assert float(cli.fmt(math.pi)) == math.pi


def test_scan_byte_identical(tmp_path):
    cfg = _write(tmp_path, "c.json", SCAN)
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert cli.main(["scan", "--config", cfg, "--out", a, "--threads", "1"]) == 0
    assert cli.main(["scan", "--config", cfg, "--out", b, "--threads", "3"]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()


def test_flags_override_config(tmp_path):
    cfg = _write(tmp_path, "c.json", SCAN)
    out = str(tmp_path / "s.csv")
    assert cli.main(["scan", "--config", cfg, "--out", out, "--lambda", "50", "--n", "10", "--samples", "4",
                     "--seed", "7"]) == 0
    rows = _rows(out)
    assert len(rows) == 61 and {r["lambda"] for r in rows} == {"50"}
    assert rows[0]["n"] == "10" and rows[0]["samples"] == "4"
    assert "seed=7" in open(out).readline()


def test_leaf_census(tmp_path):
    cfg = _write(tmp_path, "c.json", {"z_grid": {"count": 3}, "n_max": 3, "deltas": [0.1]})
    out = str(tmp_path / "census.csv")
    assert cli.main(["leaf-census", "--config", cfg, "--out", out]) == 0
    rows = _rows(out)
    assert len(rows) == 12 and list(rows[0]) == list(cli.CENSUS_COLUMNS)
    for r in rows:
        assert int(r["crossings"]) < float(r["disc_bound"])
        assert int(r["critical"]) < float(r["critical_bound"])
        if r["n"] == "0":
            assert r["crossings"] == "0"


def test_verify_polar_passes(tmp_path):
    out = str(tmp_path / "r.json")
    assert cli.main(["verify", "--suite", "appendix_polar", "--out", out]) == 0
    (rep,) = json.load(open(out))
    assert rep["statement"] == "appendix_polar" and rep["passed"]
    assert set(rep["provenance"]) >= {"config_hash", "seed", "version"}


def test_verify_all_emits_twelve(tmp_path):
    cfg = _write(tmp_path, "c.json", {"lambdas": [10, 1000], "t_grid": [0.5], "n": 30, "samples": 8,
                                      "z_grid": [0.5], "n_max": 2, "disc_n_max": 2, "lb_points": 3,
                                      "deltas": [0.1], "angle_t": [0.5]})
    out = str(tmp_path / "r.json")
    code = cli.main(["verify", "--config", cfg, "--suite", "all", "--out", out])
    reps = json.load(open(out))
    assert len(reps) == 12
    assert code == (0 if all(r["passed"] for r in reps) else 1)


def test_negative_control_exit_1(tmp_path):
    cfg = _write(tmp_path, "neg.json", {"potential": {"family": "polynomial", "a": [0.5], "b": [0.0]}})
    assert cli.main(["verify", "--config", cfg, "--suite", "lemma_lb", "--out", str(tmp_path / "r.json")]) == 1
    assert cli.main(["certify-potential", "--config", cfg, "--out", str(tmp_path / "c.json")]) == 1


def test_certify_default(tmp_path):
    out = tmp_path / "c.json"
    assert cli.main(["certify-potential", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["admissible"] and d["deriv_floor"] > 0


@pytest.mark.parametrize("doc", ['{"n": ', '{"n": 0}', '{"bogus": 1}', '{"t_grid": [3.0]}',
                                 '{"map": [2, 1, 1, 2]}', '{"potential": {"family": "x"}}'])
def test_config_errors_exit_2(tmp_path, doc):
    cfg = _write(tmp_path, "bad.json", doc)
    assert cli.main(["scan", "--config", cfg, "--out", str(tmp_path / "o.csv")]) == 2


def test_unknown_suite_exit_2():
    assert cli.main(["verify", "--suite", "lemma_xyz"]) == 2


def test_io_errors_exit_3(tmp_path):
    assert cli.main(["scan", "--config", str(tmp_path / "missing.json")]) == 3
    cfg = _write(tmp_path, "c.json", {"n": 5, "samples": 2, "t_grid": [0.5]})
    assert cli.main(["scan", "--config", cfg, "--out", str(tmp_path / "no" / "dir" / "x.csv")]) == 3


def test_threads_env_default(monkeypatch):
    monkeypatch.setenv("CATLYAP_THREADS", "5")
    args = cli.build_parser().parse_args(["scan"])
    assert cli._config(args).threads == 5


def test_config_roundtrip(tmp_path):
    cfg = RunConfig(seed=11, z_grid=(0.2, 0.4))
    p = _write(tmp_path, "c.json", {k: v for k, v in cfg.to_dict().items() if v is not None})
    assert load(p).digest() == cfg.digest()
    with pytest.raises(ConfigError):
        from_dict({"z_grid": [2.0]})
