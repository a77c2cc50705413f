import csv
import json
import math

import pytest

from ofa_pbs import analytic, detgame, econometrics, stochgame
from ofa_pbs.cli import parse_ratio_grid, run
from ofa_pbs.dist import ParameterError, make_exponential


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_det(capsys):
    code, out, _ = call(capsys, "solve-det", "--scenario", "2", "--va", "0.6", "--vb", "0.5", "--vt", "0.3")
    assert code == 0
    rec = json.loads(out)
    assert rec["total_price"] == 0.7
    assert rec["surplus_a"] == 0.2
    assert rec["block_winner"] == "A"


def test_solve_det_matches_library(capsys):
    _, out, _ = call(capsys, "solve-det", "--scenario", "1", "--va", "0.8", "--vb", "0.5", "--vt", "0.3")
    lib = detgame.solve_scenario1(detgame.DeterministicGame(0.8, 0.5, 0.3)).as_dict()
    rec = json.loads(out)
    for key, value in lib.items():
        assert rec[key] == (float(format(value, ".15g")) if isinstance(value, float) else value)


def test_sweep_file(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    code, _, _ = call(capsys, "sweep", "--vt", "1", "--rate-sum", "2", "--ratios", "0.1:0.5:0.05",
                      "--out", str(path))
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["ratio", "win_s1", "win_s2", "profit_s1", "profit_s2", "v_ta", "v_tb"]
    assert len(rows) == 10
    assert [float(r[0]) for r in rows[1:]] == pytest.approx([0.1 + 0.05 * i for i in range(9)])
    lib = analytic.sweep_comparative_statics(1.0, 2.0, parse_ratio_grid("0.1:0.5:0.05"))
    assert path.read_text() == analytic.sweep_to_csv(lib, digits=15)


def test_predict_logit(capsys):
    code, out, _ = call(capsys, "predict-logit", "--b0", "-0.821", "--b1", "2055.151", "--x", "0")
    assert code == 0
    assert round(json.loads(out)["probability"], 3) == 0.306


def test_predict_mnl(capsys, tmp_path):
    _, out, _ = call(capsys, "predict-mnl", "--x", "0")
    probs = json.loads(out)["probabilities"]
    assert set(probs) == set(econometrics.TABLE2_BUILDERS.labels)
    assert math.fsum(probs.values()) == pytest.approx(1.0, abs=1e-12)
    spec = tmp_path / "m.json"
    spec.write_text(json.dumps({"classes": ["x", "y"], "coeffs": [[0, 0], [0, 0]]}))
    _, out, _ = call(capsys, "predict-mnl", "--x", "3", "--coeffs", str(spec))
    assert json.loads(out)["probabilities"] == pytest.approx({"x": 1 / 3, "y": 1 / 3, "reference": 1 / 3})


def test_compare_and_value_ofa(capsys):
    code, out, _ = call(capsys, "compare", "--rate-a", "1", "--rate-b", "2", "--vt", "1")
    assert code == 0
    rec = json.loads(out)
    assert rec["win_prob_s2"] == pytest.approx(0.954888, abs=1e-6)
    assert rec["profit_a_s2"] == pytest.approx(1.309706, abs=1e-6)
    code, out, _ = call(capsys, "value-ofa", "--dist-a", '{"family": "exponential", "rate": 1}',
                        "--rate-b", "2", "--vt", "0.001", "--taylor")
    rec = json.loads(out)
    assert rec["taylor_v_ta"] == pytest.approx(2 * 0.001 * 2 / 3, rel=1e-9)
    g = stochgame.StochasticGame(make_exponential(1), make_exponential(2), 0.001)
    assert rec["v_ta"] == float(format(stochgame.ofa_valuation(g, "A"), ".15g"))


def test_simulate_echoes_seed(capsys):
    code, out, _ = call(capsys, "simulate", "--rate-a", "1", "--rate-b", "2", "--vt", "1",
                        "--scenario", "1", "--n", "20000", "--seed", "77")
    assert code == 0
    recs = json.loads(out)
    assert {r["metric"] for r in recs} == {"win_prob_A", "profit_A", "proposer_revenue"}
    assert all(r["seed"] == 77 and r["n"] == 20000 for r in recs)


def test_simulate_requires_seed(capsys):
    code, _, err = call(capsys, "simulate", "--rate-a", "1", "--rate-b", "2", "--vt", "1",
                        "--scenario", "1", "--n", "100")
    assert code == 2
    assert "--seed" in err


def test_direct_ofa(capsys):
    code, out, _ = call(capsys, "direct-ofa", "--rate-a", "1", "--rate-b", "2", "--vt", "1",
                        "--builder", "B", "--n", "50000", "--seed", "1")
    rec = json.loads(out)
    assert code == 0 and rec["seed"] == 1
    assert abs(rec["mean"] - (rec["formula_value"] + rec["offset"])) <= 4 * rec["std_error"]


def test_synthetic_then_fit(capsys, tmp_path):
    path = tmp_path / "obs.csv"
    code, out, _ = call(capsys, "gen-synthetic", "--kappa-a", "2", "--kappa-b", "1", "--vt", "0.001",
                        "--vol-rate", "500", "--n", "5000", "--seed", "4", "--labeling", "rival_holds_tx",
                        "--out", str(path))
    assert code == 0
    meta = json.loads(out)
    assert meta["rows"] == 5000 and meta["seed"] == 4
    code, out, _ = call(capsys, "fit-logit", "--data", str(path))
    assert code == 0
    rec = json.loads(out)
    assert rec["n_rows"] == 5000
    fit = econometrics.logit_fit(econometrics.read_observations(path))
    assert rec["beta1"] == float(format(fit.model.beta1, ".15g"))


def test_fit_header_only_and_bad_rows(capsys, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("block_number,builder,log10_price_change_abs,is_hft\n")
    assert econometrics.read_observations(empty) == []
    bad = tmp_path / "bad.csv"
    bad.write_text("block_number,builder,log10_price_change_abs,is_hft\n1,a,nan,1\n")
    code, _, err = call(capsys, "fit-logit", "--data", str(bad))
    assert code == 2 and "row 2" in err


def test_fit_degenerate_is_numeric_failure(capsys, tmp_path):
    path = tmp_path / "const.csv"
    path.write_text("block_number,builder,log10_price_change_abs,is_hft\n1,a,0.1,1\n2,b,0.2,1\n")
    code, _, err = call(capsys, "fit-logit", "--data", str(path))
    assert code == 3 and "constant" in err


@pytest.mark.parametrize("argv", [["bogus"], ["solve-det", "--scenario", "3", "--va", "1", "--vb", "1", "--vt", "1"],
                                  ["solve-det", "--scenario", "1", "--va", "x", "--vb", "1", "--vt", "1"], []])
def test_usage_errors(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2
    assert "usage" in err


def test_validation_errors(capsys):
    code, _, err = call(capsys, "solve-det", "--scenario", "1", "--va", "-1", "--vb", "1", "--vt", "1")
    assert code == 2 and "v_A" in err
    code, _, err = call(capsys, "compare", "--rate-a", "2", "--rate-b", "1", "--vt", "1")
    assert code == 2 and "dominate" in err
    code, _, _ = call(capsys, "sweep", "--vt", "1", "--ratios", "0.1:0.7:0.1")
    assert code == 2


def test_ratio_grid():
    assert parse_ratio_grid("0.1:0.5:0.05")[-1] == 0.5
    assert len(parse_ratio_grid("0.05:0.5:0.05")) == 10
    assert parse_ratio_grid("0.2,0.3") == [0.2, 0.3]
    with pytest.raises(ParameterError):
        parse_ratio_grid("0.5:0.1:0.1")
