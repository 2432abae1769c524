import csv
import json

import pytest

from chronopref.cli import main


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def star_config(tmp_path):
    return write(
        tmp_path / "star.json",
        {"model": "rum_cf", "utilities": {"x": 1.0, "y": 0.5, "z": 0.0}, "diff": {"family": "logistic", "s": 1.0}},
    )


def simulate(tmp_path, config, *extra):
    out = tmp_path / "trials.csv"
    args = ["simulate", "--config", config, "--n", "2000", "--seed", "4", "--out", str(out), *extra]
    assert main(args) == 0
    return out


def test_simulate_writes_trials_and_truth(tmp_path, star_config):
    out = simulate(tmp_path, star_config, "--pair", "x,z", "--pair", "y,z")
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["trial_id", "option_a", "option_b", "choice", "rt_seconds"]
    assert len(rows) == 4001
    truth = json.loads(out.with_suffix(".truth.json").read_text())
    assert truth["schema"] == "1" and truth["seed"] == 4
    row = truth["pairs"][0]
    assert row["v"] == pytest.approx(1.0)
    assert row["theta"]["value"] == pytest.approx(1.0, rel=1e-6)


def test_simulate_is_deterministic(tmp_path, star_config, monkeypatch):
    a = simulate(tmp_path, star_config).read_text()
    monkeypatch.setenv("CHRONO_THREADS", "1")
    b = simulate(tmp_path, star_config).read_text()
    assert a == b


def test_analyze_report_sections(tmp_path, star_config, capsys):
    data = simulate(tmp_path, star_config, "--pair", "x,z", "--pair", "y,z")
    capsys.readouterr()
    assert main(["analyze", str(data), "--tol", "dkw"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep) >= {"schema", "unrestricted", "symmetric", "fechner"}
    preds = {(p["x"], p["y"]): p["prediction"] for p in rep["symmetric"]["sign_predictions"]}
    assert preds[("x", "y")] == "x_over_y"
    assert rep["fechner"]["predictions"]


def test_predict_pair_and_not_predictable(tmp_path, star_config, capsys):
    data = simulate(tmp_path, star_config, "--pair", "x,z", "--pair", "y,z")
    assert main(["predict", str(data), "--pair", "x,y"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert 0.5 < doc["predictions"][0]["predictions"][0]["p_bar"] < 0.75
    two = simulate(tmp_path, star_config, "--pair", "x,z")
    assert main(["predict", str(two)]) == 3
    assert "not predictable" in capsys.readouterr().err


def test_check_on_fixture(tmp_path, capsys):
    fx = write(tmp_path / "fx.json", {"family": "bimodal_fixture"})
    assert main(["check", "--fixture", fx]) == 0
    err = capsys.readouterr().err
    assert "unrestricted class: PASS" in err


def test_analyze_fixture_serialises_non_finite(tmp_path, capsys):
    fx = write(tmp_path / "fx.json", {"family": "crra_lottery"})
    assert main(["analyze", "--fixture", fx, "--class", "unrestricted"]) == 0
    text = capsys.readouterr().out
    assert "NaN" not in text and "Infinity" not in text
    rep = json.loads(text)
    assert rep["analytic"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze"],
        ["analyze", "/nonexistent.csv"],
        ["simulate", "--config", "/nonexistent.json"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_bad_csv_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("trial_id,option_a,option_b,choice,rt_seconds\n1,a,b,c,0.5\n")
    assert main(["analyze", str(p)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_unknown_predict_option(tmp_path, star_config):
    data = simulate(tmp_path, star_config, "--pair", "x,z", "--pair", "y,z")
    assert main(["predict", str(data), "--pair", "x,w"]) == 2


def test_ddm_flags_only_for_ddm(tmp_path, star_config):
    assert main(["simulate", "--config", star_config, "--dt", "0.01"]) == 2


def test_tol_flag_rejects_garbage():
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "x.csv", "--tol", "lots"])
    assert exc.value.code == 2
