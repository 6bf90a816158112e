import json
import math

import jsonschema
import numpy as np
import pytest

from circsym.cli import main
from circsym.distributions import BaseFamily, SineSkewedModel
from circsym.sampling import derive_seed, sample_sine_skewed


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def two_point(tmp_path):
    p = tmp_path / "two.csv"
    p.write_text("0.5\n-0.5\n" * 4)
    return p


def test_b2bar_on_symmetric_two_point_data(capsys, two_point, schema):
    code, out, _ = run(capsys, "test", two_point, "--test", "b2bar")
    assert code == 0
    rep = json.loads(out)
    assert rep["p_value"] == pytest.approx(1.0, abs=1e-12)
    jsonschema.validate(rep, schema("test_report"))


@pytest.mark.parametrize("test", ["ParamUnknownMu", "SemiparUnknownMu"])
def test_trivial_selection_exits_2(capsys, two_point, test):
    code, out, err = run(capsys, "test", two_point, "--test", test, "--family", "vm",
                         "--concentration", 1, "--k", 1)
    assert code == 2
    assert "trivial test" in err
    assert out == ""


def test_input_errors_exit_1(capsys, tmp_path, two_point):
    assert run(capsys, "test", tmp_path / "nope.csv", "--test", "b2bar")[0] == 1
    assert run(capsys, "test", two_point, "--test", "ks")[0] == 1
    assert run(capsys, "test", two_point, "--test", "ParamKnownMu", "--family", "wc",
               "--concentration", 0.5)[0] == 1
    assert run(capsys, "test", two_point, "--test", "ParamUnknownMu")[0] == 1
    assert run(capsys, "info", "--family", "wc", "--concentration", 1.5)[0] == 1
    assert run(capsys, "bogus")[0] == 1


def test_degenerate_variance_exits_1(capsys, tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("0\n3.141592653589793\n" * 3)
    code, out, err = run(capsys, "test", p, "--test", "b2star", "--mu", 0)
    assert code == 1
    assert json.loads(out)["flags"] == ["DegenerateVariance"]


def test_bootstrap_path(capsys, tmp_path, schema):
    x = sample_sine_skewed(SineSkewedModel(BaseFamily("wc", 0.5)), 40, 2)
    p = tmp_path / "x.csv"
    p.write_text("".join("%.17g\n" % v for v in x))
    code, out, _ = run(capsys, "test", p, "--test", "SemiparUnknownMu", "--family", "wc",
                       "--k", 1, "--bootstrap", "B=99", "--seed", 4)
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, schema("test_report"))
    assert rep["bootstrap"]["B"] == 99
    assert rep["bootstrap"]["fitted_family"]["family"] == "wc"
    assert run(capsys, "test", p, "--test", "b2bar", "--bootstrap", 10)[0] == 1


def test_info(capsys, schema):
    code, out, _ = run(capsys, "info", "--family", "wc", "--concentration", 0.5, "--k", 1)
    d = json.loads(out)
    jsonschema.validate(d, schema("info"))
    assert (d["gamma11"], d["gamma12"], d["gamma22"], d["gamma22_1"]) == pytest.approx(
        (8 / 9, 0.5, 0.375, 0.09375), abs=1e-15)
    _, out, _ = run(capsys, "info", "--family", "cardioid", "--concentration", 0.3, "--k", 3)
    assert json.loads(out)["gamma12"] == 0


def test_sample_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(capsys, "sample", "--family", "vm", "--concentration", 10, "--n", 5,
                   "--seed", 1, "--out", p)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_bytes().split(b"\n")
    assert len(lines) == 6 and lines[-1] == b""
    vals = [float(v) for v in lines[:-1]]
    assert all(-math.pi <= v < math.pi for v in vals)
    run(capsys, "sample", "--family", "wc", "--concentration", 0.5, "--n", 3, "--seed", 1,
        "--lam", 0.5, "--k", 2)


def test_summary(capsys, tmp_path, schema):
    p = tmp_path / "clock.csv"
    p.write_text("# hours\n23\n1\n1\n2\n0\n22\n")
    code, out, _ = run(capsys, "summary", p, "--unit", "hours24")
    d = json.loads(out)
    jsonschema.validate(d, schema("summary"))
    assert d["n"] == 6 and d["n_distinct"] == 5 and d["skipped_lines"] == 1


def test_simulate(capsys, tmp_path):
    cfg = {
        "scenarios": [{"g0": {"family": "wc", "concentration": 0.5}, "k_prime": 1,
                       "lam": 0.4, "n": 30}],
        "tests": [{"test": "B2Bar"}],
        "replications": 20,
        "master_seed": 5,
    }
    c = tmp_path / "cfg.json"
    c.write_text(json.dumps(cfg))
    out1, out2 = tmp_path / "t1.csv", tmp_path / "t2.json"
    assert run(capsys, "simulate", "--config", c, "--out", out1)[0] == 0
    assert run(capsys, "simulate", "--config", c, "--out", out2, "--workers", 2)[0] == 0
    assert out1.read_text().count("\n") == 2
    assert json.loads(out2.read_text())["rows"][0]["replications"] == 20
    c.write_text(json.dumps({"scenarios": [], "tests": [{"test": "B2Bar"}]}))
    assert run(capsys, "simulate", "--config", c)[0] == 1


@pytest.mark.slow
def test_detects_skewness_on_seeded_synthetic_data(tmp_path, capsys):
    model = SineSkewedModel(BaseFamily("wc", 0.5), 0.0, 0.6, 1)
    hits = 0
    for seed in range(100):
        p = tmp_path / "s.csv"
        p.write_text("".join("%.17g\n" % v for v in sample_sine_skewed(model, 500, derive_seed(31, seed))))
        code, out, _ = run(capsys, "test", p, "--test", "semi-unknown", "--family", "wc",
                           "--concentration", 0.5, "--k", 1)
        assert code == 0
        hits += json.loads(out)["p_value"] < 0.05
    assert hits >= 95
