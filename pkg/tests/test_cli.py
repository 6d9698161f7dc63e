import json
import os

import pytest

from shimura_pq.cli import main


def test_ogg_command(capsys):
    assert main(["ogg", "--p", "13", "--q", "47"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ogg_case"] == "nonramified"


def test_ogg_invalid_input(capsys):
    assert main(["ogg", "--p", "4", "--q", "47"]) == 3
    assert "error" in capsys.readouterr().err


def test_check_hypotheses_not_met(tmp_path, capsys):
    code = main(["check", "--p", "7", "--q", "47", "--cache", str(tmp_path)])
    assert code == 2
    cert = json.loads(capsys.readouterr().out)
    assert cert["verdict"] == "hypotheses_not_met"


def test_check_writes_json_file(tmp_path, capsys):
    out_file = tmp_path / "cert.json"
    code = main([
        "check", "--p", "7", "--q", "47",
        "--cache", str(tmp_path), "--json", str(out_file),
    ])
    assert code == 2
    stdout = capsys.readouterr().out
    assert out_file.read_text() == stdout


def test_graph_command_with_dot(tmp_path, capsys):
    dot_file = tmp_path / "g.dot"
    code = main([
        "graph", "--p", "13", "--q", "11",
        "--cache", str(tmp_path), "--dot", str(dot_file),
    ])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["graph"]["vertices"]["count"] == 2
    assert dot_file.read_text().startswith("graph")
    assert os.path.exists(tmp_path / "graph_q11_p13_v1.json")


def test_cache_env_var_fallback(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CRITERION_CACHE_DIR", str(tmp_path))
    assert main(["graph", "--p", "13", "--q", "11"]) == 0
    capsys.readouterr()
    assert os.path.exists(tmp_path / "graph_q11_p13_v1.json")


def test_equal_primes_rejected(capsys):
    assert main(["check", "--p", "13", "--q", "13"]) == 3
