import json
import os

import pytest

from pencilcount.cli import main
from pencilcount.fixtures import TABLE1


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run_cli(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_w3_value(capsys):
    status, out, _ = run_cli(capsys, "w3", "--d", "5", "--l", "2")
    assert status == 0 and out.strip() == "17"


def test_gw3_even_degree(capsys):
    status, out, _ = run_cli(capsys, "gw3", "--d", "2")
    assert status == 0 and out.strip() == "0"


def test_w_quadric_value(capsys):
    status, out, _ = run_cli(capsys, "w-quadric", "--a", "2", "--b", "3", "--l", "3")
    assert status == 0 and out.strip() == "12"


def test_json_output_uses_decimal_strings(capsys):
    status, out, _ = run_cli(capsys, "w3", "--d", "9", "--l", "0", "--format", "json")
    assert status == 0
    payload = json.loads(out)
    assert payload == {"d": 9, "l": 0, "value": "17756793"}


def test_input_errors_exit_code_and_prefix(capsys):
    status, _, err = run_cli(capsys, "w3", "--d", "5", "--l", "5")
    assert status == 2
    assert err.startswith("ERROR 2:")
    status, _, err = run_cli(capsys, "w-quadric", "--a", "0", "--b", "0", "--l", "0")
    assert status == 2 and err.startswith("ERROR 2:")


def test_resource_cap_exit_code(capsys):
    status, _, err = run_cli(capsys, "w-quadric", "--a", "3", "--b", "4", "--l", "1",
                             "--no-cache", "--max-states", "2")
    assert status == 3
    assert err.startswith("ERROR 3:")


def test_table_csv_matches_fixtures(capsys):
    status, out, _ = run_cli(capsys, "table", "--dmax", "5", "--format", "csv")
    assert status == 0
    lines = out.strip().splitlines()
    assert lines[0] == "d,l,value"
    rows = {tuple(map(int, line.split(",")[:2])): line.split(",")[2]
            for line in lines[1:]}
    for d in (1, 3, 5):
        for l in range(d):
            assert rows[(d, l)] == TABLE1[d][l]


def test_table_text_layout(capsys):
    status, out, _ = run_cli(capsys, "table", "--dmax", "5")
    assert status == 0
    lines = out.splitlines()
    assert lines[0].split() == ["l\\d", "1", "3", "5"]
    first = lines[1].split()
    assert first == ["0", "1", "-1", "45"]


def test_table_reproducible_bytes(capsys):
    _, out1, _ = run_cli(capsys, "table", "--dmax", "5", "--format", "csv")
    _, out2, _ = run_cli(capsys, "table", "--dmax", "5", "--format", "csv")
    assert out1 == out2


def test_diagrams_dump(capsys):
    status, out, _ = run_cli(capsys, "diagrams", "--a", "2", "--b", "2",
                             "--dump", "json")
    assert status == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert len(records) == 3
    for rec in records:
        assert set(rec) >= {"floors", "elevators", "bottom", "top", "aut",
                            "mu_complex", "contrib_s0"}
        assert isinstance(rec["mu_complex"], str)
        int(rec["mu_complex"])
    assert sorted(int(r["mu_complex"]) for r in records) == [1, 1, 4]
    assert sum(int(r["contrib_s0"]) for r in records) == 8


def test_cache_file_written_and_honored(capsys, isolated_cwd):
    status, out, _ = run_cli(capsys, "w3", "--d", "5", "--l", "1")
    assert status == 0 and out.strip() == "29"
    cache_file = isolated_cwd / "pencilcount-cache.jsonl"
    assert cache_file.exists()
    lines = cache_file.read_text().strip().splitlines()
    assert any(json.loads(line)["kind"] == "w3" for line in lines)
    status, out, _ = run_cli(capsys, "w3", "--d", "5", "--l", "1")
    assert status == 0 and out.strip() == "29"
    status, _, _ = run_cli(capsys, "w3", "--d", "5", "--l", "1", "--no-cache")
    assert status == 0


def test_scan_report_command(capsys):
    status, out, _ = run_cli(capsys, "scan-report", "--a", "1", "--b", "1")
    assert status == 0
    payload = json.loads(out)
    assert payload["positions"] == 3 and payload["peak_states"] <= 4


def test_verify_paper_suite(capsys):
    status, out, _ = run_cli(capsys, "verify", "--suite", "paper")
    assert status == 0
    assert "suite paper: PASS" in out


def test_usage_error_exit_code(capsys):
    assert main(["w3", "--d", "5"]) == 2  # missing --l
