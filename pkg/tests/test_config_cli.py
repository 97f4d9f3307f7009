import json

import pytest

import run
from src.config import load_config
from src.errors import BudgetExceededError, CapacityError, ParameterError, ProtocolError, UsageError


def _write(tmp_path, text: str, name: str = "scenario.env"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_load_config_reads_key_value_files(tmp_path):
    path = _write(
        tmp_path,
        "# noise sweep\nSEED=9\neps=0.25\ndepths=1, 2,3\nrates=0.1,0.2\nexport N=4\n",
    )
    cfg = load_config("noise-grid", path)
    assert cfg.scenario == "noise-grid"
    assert cfg.seed == 9
    assert cfg.eps == 0.25
    assert cfg.n == 4
    assert cfg.depths == [1, 2, 3]
    assert cfg.rates == [0.1, 0.2]


def test_overrides_win_and_none_is_ignored(tmp_path):
    path = _write(tmp_path, "seed=9\neps=0.25\n")
    cfg = load_config("game", path, {"seed": 3, "eps": None, "out": str(tmp_path)})
    assert cfg.seed == 3
    assert cfg.eps == 0.25
    assert cfg.out == str(tmp_path)


def test_malformed_line_is_named(tmp_path):
    path = _write(tmp_path, "seed=1\nthis is not a pair\n")
    with pytest.raises(UsageError, match=":2:"):
        load_config("game", path)


def test_unknown_keys_and_bad_values_are_usage_errors(tmp_path):
    with pytest.raises(UsageError, match="colour"):
        load_config("game", _write(tmp_path, "colour=blue\n"))
    with pytest.raises(UsageError, match="eps"):
        load_config("game", _write(tmp_path, "eps=1.5\n", "bad_eps.env"))
    with pytest.raises(UsageError):
        load_config("game", _write(tmp_path, "target=pmf-file\n", "no_pmf.env"))
    with pytest.raises(UsageError):
        load_config("game", str(tmp_path / "missing.env"))


def test_scenario_mismatch(tmp_path):
    with pytest.raises(UsageError):
        load_config("game", _write(tmp_path, "scenario=maxcut\n"))


@pytest.mark.parametrize(
    "error,code",
    [
        (CapacityError("too wide"), 3),
        (BudgetExceededError("too many trials"), 4),
        (ProtocolError("bad batch"), 5),
        (UsageError("bad flag"), 2),
        (ParameterError("bad eps"), 2),
        (RuntimeError("boom"), 1),
    ],
)
def test_exit_codes(error, code):
    assert run.exit_code(error) == code


def test_parser_requires_a_known_scenario():
    args = run.build_parser().parse_args(["run", "maxcut", "--seed", "4", "-c", "x.env"])
    assert args.scenario == "maxcut"
    assert args.seed == 4
    assert args.config == "x.env"
    assert run.main(["run", "unknown-scenario"]) == 2
    assert run.main([]) == 2


def test_main_reports_bad_config(tmp_path):
    path = _write(tmp_path, "eps=-1\n")
    assert run.main(["run", "game", "--config", path, "--out", str(tmp_path)]) == 2


def test_main_runs_a_small_game(tmp_path, capsys):
    path = _write(tmp_path, "n=3\ntarget=point-mass\neps=0.5\nreferee_mode=exact\n")
    assert run.main(["run", "game", "-c", path, "--seed", "1", "--out", str(tmp_path)]) == 0
    assert "Scenario: game" in capsys.readouterr().out
    with open(tmp_path / "game" / "report.json") as f:
        report = json.load(f)
    assert report["results"]["outcome"] == "alice-wins"
    assert report["seed"] == 1


def test_main_maps_capacity_errors(tmp_path):
    path = _write(tmp_path, "n=13\ndepth=1\ncircuits=1\n")
    assert run.main(["run", "entropy-survey", "-c", path, "--out", str(tmp_path)]) == 3
