import json
import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shrinkcp.cli import main, model_config, build_parser

FAST = ["--iters", "30", "--burn", "10", "--quiet"]


def _simulate(tmp_path, *extra):
    assert main(["simulate", "--scenario", "linear-one-cp", "--t", "50", "--seed", "4",
                 "--out-dir", str(tmp_path), "--quiet", *extra]) == 0


def test_simulate_writes_series_and_truth(tmp_path):
    _simulate(tmp_path)
    csv = tmp_path / "linear-one-cp_t50_seed4.csv"
    truth = tmp_path / "linear-one-cp_t50_seed4.truth.json"
    assert csv.exists() and truth.exists()
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "t,y" and len(lines) == 51
    assert len(json.loads(truth.read_text())["changepoints"]) == 1


def test_simulate_replicates(tmp_path):
    _simulate(tmp_path, "--reps", "3")
    assert len(os.listdir(tmp_path)) == 6


def test_simulate_unknown_scenario_and_param(tmp_path):
    assert main(["simulate", "--scenario", "nope", "--out-dir", str(tmp_path), "--quiet"]) == 2
    assert main(["simulate", "--scenario", "linear-one-cp", "--param", "bogus=1",
                 "--out-dir", str(tmp_path), "--quiet"]) == 2
    assert main(["simulate", "--scenario", "linear-one-cp", "--param", "noise_hi",
                 "--out-dir", str(tmp_path), "--quiet"]) == 2


def test_bad_order_rejected_by_parser(capsys):
    with pytest.raises(SystemExit) as info:
        main(["fit", "--input", "x.csv", "--d", "4"])
    assert info.value.code == 2


def test_fit_is_deterministic(tmp_path, capsys):
    _simulate(tmp_path)
    data = str(tmp_path / "linear-one-cp_t50_seed4.csv")
    out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(["fit", "--input", data, "--seed", "2", "--out", out_a, *FAST]) == 0
    assert main(["fit", "--input", data, "--seed", "2", "--out", out_b, *FAST]) == 0
    with open(out_a + ".json", "rb") as fa, open(out_b + ".json", "rb") as fb:
        assert fa.read() == fb.read()
    header = (tmp_path / "a.csv").read_text().splitlines()[0]
    assert header.startswith("t,y,trend_mean")


def test_fit_too_short_series_is_a_validation_error(tmp_path, capsys):
    path = tmp_path / "short.csv"
    path.write_text("y\n1\n2\n3\n")
    assert main(["fit", "--input", str(path), *FAST]) == 2
    assert "SeriesTooShort" in capsys.readouterr().err


def test_evaluate_and_report(tmp_path, capsys):
    _simulate(tmp_path)
    stem = tmp_path / "linear-one-cp_t50_seed4"
    assert main(["fit", "--input", f"{stem}.csv", "--out", str(tmp_path / "fit"), *FAST]) == 0
    capsys.readouterr()
    metrics_path = str(tmp_path / "m.json")
    assert main(["evaluate", "--pred", str(tmp_path / "fit.json"), "--truth", f"{stem}.truth.json",
                 "--out", metrics_path, "--quiet"]) == 0
    metrics = json.loads(capsys.readouterr().out)
    assert 0.0 <= metrics["rand"] <= 1.0
    assert json.loads(open(metrics_path).read()) == metrics
    assert main(["report", "--report", str(tmp_path / "fit.json"), "--quiet"]) == 0
    assert "changepoints:" in capsys.readouterr().out


def test_evaluate_missing_truth(tmp_path, capsys):
    _simulate(tmp_path)
    stem = tmp_path / "linear-one-cp_t50_seed4"
    assert main(["fit", "--input", f"{stem}.csv", "--out", str(tmp_path / "fit"), *FAST]) == 0
    assert main(["evaluate", "--pred", str(tmp_path / "fit.json"), "--truth", str(tmp_path / "none.json"),
                 "--quiet"]) == 2
    assert main(["evaluate", "--pred", str(tmp_path / "fit.json"), "--quiet"]) == 2


def test_benchmark_table(tmp_path, capsys):
    out = str(tmp_path / "table.csv")
    assert main(["evaluate", "--scenario", "linear-one-cp", "--t", "60", "--reps", "2", "--methods", "pelt",
                 "--jobs", "1", "--out", out, "--quiet"]) == 0
    printed = capsys.readouterr().out
    assert "Adj. Rand Avg." in printed
    with open(out) as f:
        assert f.readline().startswith("Algorithm,Rand Avg.")


def test_iters_flag_adjusts_default_burn():
    args = build_parser().parse_args(["fit", "--input", "x.csv", "--iters", "100"])
    config = model_config(args)
    assert config.iters == 100 and config.burn == 50
    args = build_parser().parse_args(["fit", "--input", "x.csv", "--iters", "100", "--burn", "20", "--no-sv"])
    config = model_config(args)
    assert config.burn == 20 and not config.use_sv_noise


def test_cp_window_flag():
    args = build_parser().parse_args(["fit", "--input", "x.csv", "--cp-window", "1"])
    assert model_config(args).cp_window == 1
    assert model_config(build_parser().parse_args(["fit", "--input", "x.csv"])).cp_window is None
