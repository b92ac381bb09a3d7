import csv
import io
import json
import subprocess
import sys

import pytest

from collatz_paths.cli import main, run
from collatz_paths.paths import iter_paths_upto


def out(argv):
    outcome = run(argv)
    return outcome.exit_code, outcome.payload


def test_simulate_text():
    code, text = out(["simulate", "22", "--moves", "4"])
    assert code == 0
    assert text.splitlines() == ["22 11 17 26 13", "VHHV"]


def test_simulate_until_one():
    code, text = out(["simulate", "27", "--until-one", "--format", "json"])
    doc = json.loads(text)
    assert code == 0 and doc["moves"] == "70" and doc["values"][-1] == "1"


def test_simulate_needs_mode():
    assert out(["simulate", "27"])[0] == 2


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["apply", "22", "--path", "2:2:0,2"], "13"),
        (["apply", "118", "--path", "4:3:0,2,4"], "76"),
        (["coeff", "--path", "4:3:0,2,4"], "170"),
        (["coeff", "--path", "1:2:1,1"], "1"),
        (["min-follower", "--path", "1:3:1,1,1"], "5"),
        (["min-follower", "--path", "1:1:0", "--any-end", "--oracle"], "2"),
        (["min-follower", "--path", "4:0:"], "31"),
    ],
)
def test_documented_values(argv, expected):
    code, text = out(argv)
    assert code == 0 and text.strip() == expected


def test_apply_not_following():
    assert out(["apply", "21", "--path", "2:2:0,2"])[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["coeff", "--path", "2:2:1"],
        ["coeff", "--path", "2:2:2,0"],
        ["coeff", "--path", "2:1:3"],
        ["solve", "--path", "4:2:3,4", "--frobnicate"],
        ["bogus"],
        ["audit", "lemma-9.9"],
        ["audit", "rhin-crossover", "--precision", "20"],
    ],
)
def test_usage_errors(argv):
    assert out(argv)[0] == 2


def test_solve_json_round_trip():
    code, text = out(["solve", "--path", "4:2:3,4", "--format", "json"])
    doc = json.loads(text)
    assert code == 0
    assert doc["c"] == ["5", "20"]
    assert (doc["x_residue"], doc["x_modulus"], doc["min_follower"]) == ("71", "128", "71")
    assert json.dumps(doc, indent=2, sort_keys=True) + "\n" == text


def test_solve_residue_class():
    doc = json.loads(out(["solve", "--path", "1:1:0", "--format", "json"])[1])
    assert (doc["x_residue"], doc["x_modulus"]) == ("6", "8")


def test_oracle_flag_agrees_with_solver():
    for path in iter_paths_upto(10):
        lit = path.literal()
        for extra in ([], ["--any-end"]):
            solver = out(["min-follower", "--path", lit, *extra])
            oracle = out(["min-follower", "--path", lit, "--oracle", *extra])
            assert solver == oracle, lit


def test_audit_refuted_exit():
    code, text = out(["audit", "lemma-3.1", "--max-moves", "3", "--x-bound", "64", "--format", "json"])
    doc = json.loads(text)
    assert code == 1
    assert doc["results"][0]["verdict"] == "Refuted"


def test_audit_holds_exit():
    code, _ = out(["audit", "rhin-crossover", "--n-lo", "96", "--n-hi", "120"])
    assert code == 0


def test_growth_table_csv():
    code, text = out(["audit", "lemma-3.3", "--max-moves", "8", "--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 1
    assert list(rows[0]) == ["total_moves", "n", "k", "r_list", "min_follower"]
    assert [r["min_follower"] for r in rows] == ["3", "7", "11", "7", "27", "27", "27", "31"]


def test_scan():
    code, text = out(["scan", "--x-bound", "1000", "--cap", "10000", "--format", "json"])
    doc = json.loads(text)
    assert code == 0 and doc["results"][0]["verdict"] == "Holds"


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    assert main(["solve", "--path", "4:2:3,4", "--format", "json", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["min_follower"] == "71"
    assert [p.name for p in tmp_path.iterdir()] == ["report.json"]


def test_out_file_untouched_on_error(tmp_path):
    target = tmp_path / "keep.txt"
    target.write_text("old")
    assert main(["apply", "21", "--path", "2:2:0,2", "--out", str(target)]) == 2
    assert target.read_text() == "old"


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "collatz_paths.cli", "apply", "22", "--path", "2:2:0,2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "13"
