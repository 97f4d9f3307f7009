import json

import pandas as pd
import pytest

from src.config import load_config
from src.engines import DensePmf
from src.errors import UsageError
from src.scenarios import build_target, run_scenario


def _run(tmp_path, scenario: str, **values):
    cfg = load_config(scenario, overrides={"out": str(tmp_path), **values})
    report = run_scenario(cfg)
    with open(tmp_path / scenario / "report.json") as f:
        saved = json.load(f)
    assert saved["scenario"] == scenario
    assert saved["results"] == json.loads(json.dumps(report.results))
    return report


def test_game_scenario(tmp_path):
    report = _run(tmp_path, "game", n=4, depth=8, eps=0.4, seed=2)
    results = report.results
    assert results["outcome"] == "alice-wins"
    assert results["within_round_bound"]
    assert results["errors"] == []
    rounds = pd.read_csv(tmp_path / "game" / "rounds.csv")
    assert len(rounds) == results["rounds"]


def test_game_scenario_reads_pmf_files(tmp_path):
    path = tmp_path / "target.json"
    path.write_text(json.dumps(DensePmf.point_mass(3, 5).to_json()))
    cfg = load_config("game", overrides={"target": "pmf-file", "pmf_file": str(path), "out": str(tmp_path)})
    pmf, label = build_target(cfg)
    assert pmf.prob(5) == 1.0
    assert "target.json" in label

    cfg = load_config("game", overrides={"target": "pmf-file", "pmf_file": str(tmp_path / "nope.json")})
    with pytest.raises(UsageError):
        build_target(cfg)


def test_xhog_spoof_scenario(tmp_path):
    report = _run(tmp_path, "xhog-spoof", n=6, depth=12, eps=0.2, k=5, repetitions=6, threads=2)
    results = report.results
    assert results["set_average_at_least_b"]
    assert results["heavy_size_bound_holds"]
    assert results["expected_evaluations_per_sample"] == pytest.approx(64 / results["set_size"])
    frame = pd.read_csv(tmp_path / "xhog-spoof" / "spoof.csv")
    assert len(frame) == 6
    assert (frame["draws"] >= 5).all()


def test_clifford_scenario(tmp_path):
    report = _run(tmp_path, "clifford", n=4, circuits=6, eps=0.3)
    results = report.results
    assert results["circuits"] == 6
    assert results["with_z_string"] + results["without_z_string"] == 6
    if results["with_z_string"]:
        assert results["all_gaps_half"]
        assert results["game_verdict"] in ("bob-refuted-alice", "bob-conceded")
        assert (tmp_path / "clifford" / "game" / "transcript.json").exists()
    if results["without_z_string"]:
        assert results["without_z_string_confirmed"]


def test_maxcut_scenario(tmp_path):
    report = _run(tmp_path, "maxcut", n=6, degree=3, eps=0.1, round_cap=10, referee_mode="exact")
    results = report.results
    assert results["expected_f_monotone"]
    assert results["max_gibbs_form_error"] < 1e-9
    assert results["final_expected_f"] <= results["target_f"] + 1e-12
    frame = pd.read_csv(tmp_path / "maxcut" / "maxcut.csv")
    assert len(frame) == results["updates"] + 1
    assert frame["beta_update_rule"].iloc[0] == 0.0


def test_entropy_survey_scenario(tmp_path):
    report = _run(tmp_path, "entropy-survey", n=4, depth=6, circuits=20, deltas="0.1,0.5")
    results = report.results
    assert [row["delta"] for row in results["thresholds"]] == [0.1, 0.5]
    assert results["mean_renyi2"] <= results["mean_shannon"]
    assert results["uniform_p"] == pytest.approx(1 / 16)
    frame = pd.read_csv(tmp_path / "entropy-survey" / "entropy.csv")
    assert len(frame) == 20
    assert (frame["shannon"] >= frame["renyi2"] - 1e-12).all()


def test_noise_grid_scenario(tmp_path):
    report = _run(tmp_path, "noise-grid", n=3, depths="1,2,3", rates="0.1,0.3", sdpi_trials=50)
    results = report.results
    assert results["points"] == 6
    assert results["budget_holds"]
    assert results["sdpi_holds"]
    assert results["divergence_decreases_with_depth"] is True
    assert results["measured_below_state_divergence"] is True
    grid = pd.read_csv(tmp_path / "noise-grid" / "noise_grid.csv")
    assert (grid["state_divergence_nats"] <= grid["budget_nats"] + 1e-9).all()
    sdpi = pd.read_csv(tmp_path / "noise-grid" / "sdpi.csv")
    assert list(sdpi["p"]) == [0.1, 0.3]


@pytest.mark.parametrize(
    "scenario,values,csv_name",
    [
        ("entropy-survey", {"n": 4, "depth": 6, "circuits": 12, "threads": 3}, "entropy.csv"),
        ("noise-grid", {"n": 3, "depths": "1,2", "rates": "0.1,0.3", "sdpi_trials": 20, "threads": 2}, "noise_grid.csv"),
        ("clifford", {"n": 3, "circuits": 8, "threads": 2}, "clifford.csv"),
        ("game", {"n": 4, "depth": 8, "eps": 0.4}, "rounds.csv"),
    ],
)
def test_same_seed_writes_identical_csvs(tmp_path, scenario, values, csv_name):
    outputs = []
    for run in ("first", "second"):
        cfg = load_config(scenario, overrides={"out": str(tmp_path / run), "seed": 13, **values})
        run_scenario(cfg)
        outputs.append((tmp_path / run / scenario / csv_name).read_bytes())
    assert outputs[0] and outputs[0] == outputs[1]
