import io
import json
import os
import sys

import pandas as pd
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from app import main
from src import config


@pytest.fixture(autouse=True)
def no_oracle_cache(monkeypatch):
    monkeypatch.setattr(config, "ENABLE_ORACLE_CACHE", False)


@pytest.fixture
def planted_file(tmp_path, capsys):
    path = tmp_path / "planted.el"
    code = main(["gen", "planted", "--n", "40", "--k", "10", "--pin", "0.9", "--pout", "0.05", "--seed", "1",
                 "--out", str(path)])
    assert code == 0
    info = json.loads(capsys.readouterr().out)
    assert info["n"] == 40 and len(info["block"]) == 10
    return path


def _error(capsys):
    lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])["error"]


def test_oracle_shorthand_prints_one_row(planted_file, capsys):
    assert main(["--algo", "oracle", "--input", str(planted_file)]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert frame["algo"].tolist() == ["oracle"]
    assert frame["lambda_star"].iloc[0] > 0


def test_run_writes_result_rows(planted_file, tmp_path):
    out = tmp_path / "ledp.csv"
    code = main(["run", "--algo", "ledp", "--input", str(planted_file), "--eps", "4", "--trials", "2",
                 "--seed", "3", "--T", "5", "--out", str(out), "--no-progress"])
    assert code == 0
    frame = pd.read_csv(out, comment="#")
    assert frame["trial"].tolist() == [0, 1]
    assert "true_density" not in frame


def test_summarize_and_replay(planted_file, tmp_path, capsys):
    out = tmp_path / "pure.csv"
    transcript = tmp_path / "pure.jsonl"
    assert main(["--algo", "pure", "--input", str(planted_file), "--eps", "2", "--trials", "3",
                 "--reveal-truth", "--transcript", str(transcript), "--out", str(out), "--no-progress"]) == 0
    assert out.read_text().startswith("#")

    assert main(["summarize", str(out)]) == 0
    assert "== gaps ==" in capsys.readouterr().out

    assert main(["replay", str(transcript)]) == 0
    assert json.loads(capsys.readouterr().out)["verified"] is True


def test_gen_weights_and_directed(tmp_path, capsys):
    base = tmp_path / "base.el"
    assert main(["gen", "gnp", "--n", "12", "--p", "0.3", "--seed", "2", "--out", str(base)]) == 0
    weighted = tmp_path / "weighted.el"
    assert main(["gen", "weights", "--input", str(base), "--low", "1", "--high", "3", "--out", str(weighted)]) == 0
    assert "w 0 " in weighted.read_text()
    directed = tmp_path / "directed.el"
    assert main(["gen", "planted-directed", "--n", "12", "--s-size", "3", "--t-size", "4", "--pin", "0.9",
                 "--pout", "0.05", "--out", str(directed)]) == 0
    capsys.readouterr()
    assert main(["--algo", "weighted", "--input", str(weighted), "--zero-noise", "--T", "4", "--no-progress"]) == 0
    assert main(["--algo", "directed", "--input", str(directed), "--zero-noise", "--T", "2", "--beta", "1",
                 "--no-progress"]) == 0


def test_missing_generator_arguments_exit_two(tmp_path, capsys):
    assert main(["gen", "planted", "--n", "10", "--out", str(tmp_path / "g.el")]) == 2
    assert "--k" in _error(capsys)["message"]


def test_bad_arguments_exit_two(planted_file, capsys):
    assert main(["--algo", "ledp", "--input", str(planted_file)]) == 2
    assert _error(capsys)["details"]["type"] == "InvalidArgumentError"
    assert main(["--algo", "centralized", "--input", str(planted_file), "--zero-noise", "--T", "3"]) == 2
    with pytest.raises(SystemExit) as excinfo:
        main(["--algo", "quantum", "--input", str(planted_file)])
    assert excinfo.value.code == 2


def test_malformed_graph_exits_three(tmp_path, capsys):
    path = tmp_path / "bad.el"
    path.write_text("0 1\n1 2 3 4\n")
    assert main(["--algo", "ledp", "--input", str(path), "--eps", "1"]) == 3
    assert _error(capsys)["details"]["type"] == "GraphFormatError"
    assert main(["--algo", "ledp", "--input", str(tmp_path / "missing.el"), "--eps", "1"]) == 3


def test_infeasible_privacy_exits_four(planted_file, capsys):
    assert main(["--algo", "ledp", "--input", str(planted_file), "--eps", "500", "--delta", "1e-6"]) == 4
    error = _error(capsys)
    assert error["details"]["type"] == "InfeasiblePrivacyError"
    assert error["exit_code"] == 4


def test_config_file_precedence(planted_file, tmp_path, capsys):
    settings = tmp_path / "run.cfg"
    settings.write_text("# ledp defaults\neps = 4\nT = 5  # rounds\nn-jobs = 1\n")
    resolved = config.resolve_settings({"eps": None, "T": 9}, settings)
    assert (resolved["eps"], resolved["T"], resolved["n_jobs"]) == (4, 9, 1)
    assert resolved["delta"] == config.DEFAULT_DELTA

    assert main(["--algo", "ledp", "--input", str(planted_file), "--config", str(settings), "--no-progress"]) == 0
    capsys.readouterr()
    assert main(["--algo", "ledp", "--input", str(planted_file), "--config", str(settings), "--eps", "500"]) == 4
