import csv
import io
import json

import pytest

from netnl.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "star_c", "--n", "2", "--m", "3")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == "netnl/1"
    row = data["results"][0]
    assert (row["local"], row["lnl"], row["fnn"]) == (8.0, 10.0, True)
    assert abs(row["quantum"] - 10.3923) < 1e-4


def test_sweep_reproduces_ratio_grid(capsys, tmp_path):
    out_path = tmp_path / "fig2.csv"
    code, out, _ = run(capsys, "sweep", "--family", "star_delta", "--m", "3..8", "--n", "2..7", "--out", str(out_path))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(out_path.read_text())))
    assert len(rows) == 36
    assert all(float(r["ratio"]) >= 1 for r in rows)


def test_sweep_is_byte_identical_across_thread_counts(capsys, monkeypatch):
    args = ("sweep", "--family", "star_c", "--m", "2..8", "--n", "2..6")
    _, single, _ = run(capsys, *args, "--threads", "1")
    monkeypatch.setenv("NETNL_THREADS", "4")
    _, env_threads, _ = run(capsys, *args)
    _, many, _ = run(capsys, *args, "--threads", "8")
    assert single == env_threads == many


def test_fnn_threshold(capsys):
    code, out, _ = run(capsys, "fnn", "--family", "star_c", "--m", "5")
    assert code == 0 and json.loads(out)["results"][0]["threshold_n"] == 4


@pytest.mark.parametrize("family", ["star_delta", "star_c", "chain_I", "chain_T"])
def test_quantum_gap(capsys, family):
    code, out, _ = run(capsys, "quantum", "--family", family, "--n", "2..4", "--m", "2..6")
    assert code == 0
    assert all(r["gap"] <= 1e-9 and r["ok"] for r in json.loads(out)["results"])


def test_lnl_oracle_sos_validate(capsys):
    code, out, _ = run(capsys, "lnl", "--family", "star_c", "--n", "2", "--m", "3")
    row = json.loads(out)["results"][0]
    assert code == 0 and row["value"] == 10 and row["ok"]
    code, out, _ = run(capsys, "lnl", "--family", "star_delta", "--n", "4", "--m", "3", "--p", "3", "--format", "csv")
    assert code == 0 and out.startswith("family,")
    code, out, _ = run(capsys, "oracle", "--family", "chain_T", "--n", "2", "--m", "4")
    assert code == 0 and json.loads(out)["results"][0]["value"] == 12
    code, out, _ = run(capsys, "sos", "--family", "star_c", "--n", "2", "--m", "3")
    assert code == 0 and json.loads(out)["results"][0]["ok"]
    code, out, _ = run(capsys, "validate")
    assert code == 0 and len(json.loads(out)["findings"]) == 4


def test_argument_errors_exit_2(capsys):
    for argv in (["bounds"], ["bounds", "--family", "star_c", "--m", "5..3"], ["nonsense"],
                 ["bounds", "--family", "star_c", "--tol", "0"], ["sos", "--family", "chain_I"],
                 ["bounds", "--family", "star_delta", "--n", "2", "--p", "3"]):
        code, out, err = run(capsys, *argv)
        assert code == 2 and out == ""
        assert json.loads(err)["error"] == "argument"


def test_guard_exit_1(capsys):
    code, _, err = run(capsys, "oracle", "--family", "star_delta", "--n", "3", "--m", "12")
    assert code == 1
    assert json.loads(err)["module"] == "oracle"


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("NETNL_THREADS", "many")
    code, _, _ = run(capsys, "bounds", "--family", "star_c")
    assert code == 2


def test_parse_range():
    assert parse_range("3..5") == [3, 4, 5]
    assert parse_range("2,4") == [2, 4]
    with pytest.raises(ValueError):
        parse_range("")
