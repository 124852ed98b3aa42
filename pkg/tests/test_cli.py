import json

import pytest

from sgqpt.cli import main
from sgqpt.harness import load_stats, load_summary

FAST = ["--trials", "2", "--iterations", "30", "--shots", "20", "--seed", "4"]


def test_simulate_fit_plot(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["simulate", *FAST, "--out", str(out)]) == 0
    assert (out / "stats.csv").exists() and (out / "summary.json").exists() and (out / "plot.svg").exists()
    assert main(["fit", str(out), "--kmin", "5", "--write", str(tmp_path / "fit.json")]) == 0
    assert json.loads((tmp_path / "fit.json").read_text())["k_min"] == 5
    assert main(["plot", str(out), str(out), "--label", "a", "--label", "b", "--hline", "QPT=0.1", "--out", str(tmp_path / "p.svg")]) == 0
    assert (tmp_path / "p.svg").stat().st_size > 0


def test_flags_reach_config(tmp_path):
    out = tmp_path / "run"
    args = ["simulate", *FAST, "--gamma", "0.3", "--alpha-exp", "0.7", "--delta0", "0.1", "--g0", "1.5",
            "--A", "2", "--noise", "jitter", "--epsilon-deg", "3", "--stride", "5", "--no-plot", "--out", str(out)]
    assert main(args) == 0
    cfg = load_summary(out)["config"]
    assert cfg["schedule"] == {"gamma": 0.3, "alpha_exp": 0.7, "delta0": 0.1, "g0": 1.5, "a_stability": 2.0}
    assert cfg["noise"] == {"kind": "jitter", "epsilon": 3.0}
    assert cfg["stride"] == 5 and cfg["trials"] == 2
    assert list(load_stats(out).iterations) == [5, 10, 15, 20, 25, 30]


def test_config_file_with_override(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"trials": 3, "iterations": 10, "shots": 5, "gamma": 0.42, "alpha_exp": 0.92}))
    out = tmp_path / "run"
    assert main(["simulate", "--config", str(conf), "--trials", "2", "--no-plot", "--out", str(out)]) == 0
    cfg = load_summary(out)["config"]
    assert cfg["trials"] == 2 and cfg["iterations"] == 10 and cfg["schedule"]["gamma"] == 0.42


def test_preset(tmp_path):
    out = tmp_path / "run"
    assert main(["simulate", "--preset", "fig4", "--trials", "2", "--no-plot", "--out", str(out)]) == 0
    cfg = load_summary(out)["config"]
    assert cfg["iterations"] == 50 and cfg["shots"] == 100 and cfg["schedule"]["alpha_exp"] == 0.85


def test_rerun_from_summary_is_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", *FAST, "--no-plot", "--out", str(a)]) == 0
    assert main(["simulate", "--config", str(a / "summary.json"), "--no-plot", "--out", str(b)]) == 0
    assert (a / "stats.csv").read_bytes() == (b / "stats.csv").read_bytes()


def test_baseline(tmp_path):
    out = tmp_path / "qpt"
    assert main(["baseline", "--trials", "2", "--photons", "1800", "--estimator", "procrustes", "--out", str(out)]) == 0
    summary = load_summary(out)
    assert summary["config"]["mode"] == "qpt" and summary["total_shots"] == 3600


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--trials", "0"],
        ["simulate", "--noise", "ideal", "--epsilon-deg", "2"],
        ["simulate", "--gamma", "2"],
        ["fit", "/nonexistent/stats.csv"],
        ["baseline", "--photons", "5"],
    ],
)
def test_errors_exit_nonzero(argv, tmp_path, capsys):
    assert main([*argv, *(["--out", str(tmp_path / "x")] if argv[0] != "fit" else [])]) != 0
    assert "error:" in capsys.readouterr().err


def test_fit_too_few_points(tmp_path, capsys):
    out = tmp_path / "run"
    main(["simulate", *FAST, "--no-plot", "--out", str(out)])
    assert main(["fit", str(out)]) != 0
