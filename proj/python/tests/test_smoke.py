import math

import pytest

import degensolve as ds

CONFIG = {
    "seed": 7,
    "problem": {
        "kind": "regularized",
        "exponent": 1.3,
        "p": 4,
        "operator": {"diagonal": [1.0, 4.0]},
        "lambda": [50.0, 20.0],
        "rhs": "x^2 * exp(-x)",
        "mesh": {"n": 129},
    },
}


def test_solve1d_runs(tmp_path):
    code, report = ds.run("solve1d", CONFIG, tmp_path)
    assert code == 0
    assert report["version"].startswith("degensolve")
    assert report["results"]["residual"] < 1e-8
    assert (tmp_path / "solution.csv").exists()
    assert (tmp_path / "report.json").exists()


def test_rerun_is_byte_identical(tmp_path):
    code, _ = ds.run("solve1d", CONFIG, tmp_path)
    assert code == 0
    rep = (tmp_path / "report.json").read_bytes()
    sol = (tmp_path / "solution.csv").read_bytes()
    code, _ = ds.run("solve1d", CONFIG, tmp_path)
    assert code == 0
    assert (tmp_path / "report.json").read_bytes() == rep
    assert (tmp_path / "solution.csv").read_bytes() == sol


def test_bad_config_reports_the_key(tmp_path):
    bad = {"seed": 7, "problem": dict(CONFIG["problem"], alfa=2)}
    code, report = ds.run("solve1d", bad, tmp_path)
    assert code == 2
    assert "alfa" in report["error"]["message"]


def test_trace_exponent():
    assert ds.sigma_trace(1, 1.3, 4.0) == pytest.approx(1.0 / 12.0)
    assert ds.sigma_trace(0, 1.3, 4.0) == pytest.approx(-5.0 / 12.0)


def test_interp_norm_routes_agree():
    closed = ds.interp_norm([1.0], [3.0], 0.25, 2.0, "closed")
    k = ds.interp_norm([1.0], [3.0], 0.25, 2.0, "k")
    assert k / closed == pytest.approx(math.sqrt(8.0 / 3.0), rel=1e-2)
    with pytest.raises(ValueError):
        ds.interp_norm([1.0], [3.0], 1.5, 2.0, "closed")


def test_eval_expr():
    assert ds.eval_expr("2^-abs(m-j)", {"m": 3.0, "j": 1.0}) == 0.25
    with pytest.raises(ValueError):
        ds.eval_expr("q + 1", {"x": 1.0})
