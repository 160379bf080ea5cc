import json
import os
from pathlib import Path

import pytest

from jcmap.cli import main
from jcmap.pipeline import RunConfig, run_map_pipeline

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_map_writes_all_formats(tmp_path, capsys):
    code, _, _ = run(["map", "--input", "@fixture", "--ego", "ego", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["layout.csv", "loadings.csv", "map.json", "map.svg"]
    report = json.loads((tmp_path / "map.json").read_text())
    assert report["ego"] == "EGO" and report["year"] == 1994
    assert report["members"][0]["journal"] == "EGO"
    assert list(report) == sorted(report)


def test_map_matches_golden(tmp_path, capsys):
    assert run(["map", "--input", "@fixture", "--ego", "EGO", "--seed", "42", "--out", str(tmp_path)], capsys)[0] == 0
    for name in ("map.json", "layout.csv", "map.svg"):
        assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes(), name


def test_rerun_from_config_echo(tmp_path, capsys):
    argv = ["map", "--input", "@fixture", "--ego", "EGO", "--year", "1986", "--seed", "7",
            "--restarts", "3", "--factors", "2", "--out", str(tmp_path / "a")]
    assert run(argv, capsys)[0] == 0
    echo = json.loads((tmp_path / "a" / "map.json").read_text())["config"]
    run_map_pipeline(RunConfig.from_echo(echo, out=str(tmp_path / "b")))
    for name in ("map.json", "layout.csv", "loadings.csv", "map.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_multiple_years_use_subdirectories(tmp_path, capsys):
    code, _, _ = run(["map", "--input", "@fixture", "--ego", "EGO", "--year", "1980", "--year", "1994",
                      "--restarts", "2", "--format", "json", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["1980", "1994"]
    assert [p.name for p in (tmp_path / "1980").iterdir()] == ["map.json"]


def test_nothing_written_outside_out(tmp_path, capsys, monkeypatch):
    cwd = tmp_path / "cwd"
    cwd.mkdir()
    monkeypatch.chdir(cwd)
    out = tmp_path / "out"
    run(["map", "--input", "@fixture", "--ego", "EGO", "--restarts", "2", "--out", str(out)], capsys)
    run(["trend", "--input", "@fixture", "--ego", "A01", "--other", "B01", "--out", str(out)], capsys)
    run(["simulate", "--n-steps", "100", "--out", str(out)], capsys)
    run(["fixture", "--out", str(out)], capsys)
    assert list(cwd.iterdir()) == []
    assert sorted(os.listdir(tmp_path)) == ["cwd", "out"]


def test_empty_environment_is_data_error(tmp_path, capsys):
    code, _, err = run(["map", "--input", "@fixture", "--ego", "NOPE", "--out", str(tmp_path / "o")], capsys)
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["error"] == "empty-environment"
    assert not (tmp_path / "o").exists()


@pytest.mark.parametrize("argv", [
    ["map", "--input", "x.csv"],
    ["map", "--input", "x.csv", "--ego", "E", "--threshold", "2"],
    ["map", "--input", "x.csv", "--ego", "E", "--factors", "0"],
    ["trend", "--input", "x.csv", "--ego", "A", "--other", "B", "--window", "4"],
    ["simulate", "--n-steps", "10", "--alpha", "2"],
    ["bogus"],
])
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 1
    assert json.loads(err.strip().splitlines()[-1])["error"] == "usage"


def test_bad_input_files(tmp_path, capsys):
    assert run(["ingest-check", "--input", str(tmp_path / "missing.csv")], capsys)[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("year,citing,cited,count\n1990,A,B,-1\n")
    code, _, err = run(["ingest-check", "--input", str(bad)], capsys)
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["line"] == 2


def test_ingest_check(capsys):
    code, out, _ = run(["ingest-check", "--input", "@fixture"], capsys)
    assert code == 0
    summary = json.loads(out)
    assert summary["years"] == list(range(1980, 1996, 2))
    assert summary["journals"] == 19


def test_trend_outputs_and_short_range_warning(tmp_path, capsys):
    code, _, _ = run(["trend", "--input", "@fixture", "--ego", "A01", "--other", "B01",
                      "--from", "1980", "--to", "1982", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = (tmp_path / "trend.csv").read_text().splitlines()
    assert rows[0] == "year,a_cites_b,b_cites_a,a_cites_b_ma,b_cites_a_ma"
    assert len(rows) == 3 and rows[1].endswith(",,")
    doc = json.loads((tmp_path / "trend.json").read_text())
    assert doc["year_basis"] == "available" and doc["units"] == "count"
    assert any("no full 3-year window" in w for w in doc["warnings"])


def test_trend_window_one_equals_raw(tmp_path, capsys):
    run(["trend", "--input", "@fixture", "--ego", "A01", "--other", "B01", "--window", "1",
         "--format", "json", "--out", str(tmp_path)], capsys)
    doc = json.loads((tmp_path / "trend.json").read_text())
    assert [v for _, v in doc["a_cites_b_ma"]] == doc["a_cites_b"]


def test_trend_all_years_zero_fills(tmp_path, capsys):
    run(["trend", "--input", "@fixture", "--ego", "A01", "--other", "B01", "--all-years",
         "--from", "1980", "--to", "1984", "--format", "json", "--out", str(tmp_path)], capsys)
    doc = json.loads((tmp_path / "trend.json").read_text())
    assert doc["years"] == [1980, 1981, 1982, 1983, 1984]
    assert doc["a_cites_b"][1] == 0 and doc["a_cites_b"][3] == 0


def test_trend_unknown_journal(tmp_path, capsys):
    code, _, err = run(["trend", "--input", "@fixture", "--ego", "A01", "--other", "ZZZ",
                        "--out", str(tmp_path)], capsys)
    assert code == 2
    assert "ZZZ" in json.loads(err.strip().splitlines()[-1])["message"]


def test_simulate_stdout_and_conservation(capsys):
    code, out, _ = run(["simulate", "--n-steps", "500", "--n-seed", "3", "--seed", "5"], capsys)
    assert code == 0
    assert sum(int(v) for v in out.split()) == 503
    assert run(["simulate", "--n-steps", "500", "--n-seed", "3", "--seed", "5"], capsys)[1] == out


def test_fixture_command(tmp_path, capsys):
    assert run(["fixture", "--rate", "0.05", "--seed", "3", "--out", str(tmp_path)], capsys)[0] == 0
    text = (tmp_path / "fixture.csv").read_text()
    assert text.startswith("year,citing,cited,count\n")
    code, out, _ = run(["ingest-check", "--input", str(tmp_path / "fixture.csv")], capsys)
    assert code == 0 and json.loads(out)["years"] == [1980]
