"""CLI golden files and exit codes.

Set FSMAT_REGEN_GOLDEN=1 to rewrite tests/golden after a deliberate schema change.
"""
import io
import json
import os
from pathlib import Path

import pytest

from fsmat.cli import run

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"
REGEN = os.environ.get("FSMAT_REGEN_GOLDEN") == "1"

# Wall-clock fields and the backend name vary between runs and machines.
VOLATILE = {"timing", "wall_time", "backend"}


def normalize(obj):
    if isinstance(obj, dict):
        return {k: normalize(v) for k, v in obj.items() if k not in VOLATILE}
    if isinstance(obj, list):
        return [normalize(v) for v in obj]
    if isinstance(obj, float):
        return round(obj, 9)
    return obj


def invoke(argv, monkeypatch):
    monkeypatch.chdir(DATA)
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


CASES = {
    "compress_all": (["compress", "pair.fam", "all"], 0),
    "compress_unchanged": (["compress", "empty_and_one.fam", "1"], 0),
    "compress_malformed": (["compress", "malformed.fam"], 2),
    "shatter_power2": (["shatter", "power2.fam", "2"], 0),
    "shatter_five": (["shatter", "five.fam", "2"], 0),
    "shatter_k0": (["shatter", "power2.fam", "0"], 0),
    "shatter_k0_empty": (["shatter", "empty.fam", "0"], 0),
    "shatter_k_too_big": (["shatter", "power2.fam", "3"], 2),
    "pipeline_lex8": (["pipeline", "lex8.mat", "2"], 0),
    "pipeline_single_column": (["pipeline", "single_column.mat", "1"], 0),
    "pipeline_duplicate": (["pipeline", "duplicate.mat", "2"], 2),
    "contributions_row": (["contributions", "row0101.mat", "1"], 0),
    "contributions_binary8": (["contributions", "binary8.mat", "2"], 0),
    "fs_zeros": (["fs-search", "--m", "3", "--pattern", "zeros.pat"], 0),
    "fs_swap": (["fs-search", "--m", "3", "--pattern", "swap.pat", "--seed", "7"], 0),
    "fs_budget": (["fs-search", "--m", "4", "--pattern", "swap.pat", "--budget", "50"], 3),
    "exponents_exact_k4": (["exponents", "--k", "4", "--mode", "exact"], 0),
    "exponents_quadratic_table": (["exponents", "--table", "3..6", "--mode", "quadratic"], 0),
    "exponents_k2_sequence": (["exponents", "--k", "2", "--mode", "k2", "--sequence", "5"], 0),
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, monkeypatch):
    argv, want_code = CASES[name]
    code, out, _ = invoke(argv + ["--json"], monkeypatch)
    assert code == want_code
    payload = normalize(json.loads(out))
    assert payload["command"] == argv[0]
    path = GOLDEN / f"{name}.json"
    if REGEN:
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    assert payload == json.loads(path.read_text())


def test_golden_values_spot_checks():
    g = {p.stem: json.loads(p.read_text()) for p in GOLDEN.glob("*.json")}
    r = g["compress_all"]["result"]
    assert r["sets"] == [[]] and (r["measure_before"], r["measure_after"]) == (2, 0)
    assert g["compress_unchanged"]["result"]["sets"] == [[], [1]]
    assert g["shatter_power2"]["result"]["shattered"] == [[1, 2]]
    assert g["shatter_power2"]["result"]["threshold_met"]
    assert g["shatter_five"]["result"]["count"] > 0
    assert g["shatter_k0"]["result"]["shattered"] == [[]]
    assert g["shatter_k0_empty"]["result"]["shattered"] == []
    p = g["pipeline_lex8"]["result"]
    assert len(p["shattered"]) == 3 and p["contributions"] == 3 and p["shattering_transfer"]
    assert g["pipeline_single_column"]["result"]["shattered"] == []
    assert g["contributions_row"]["result"]["total"] == 2
    assert g["contributions_binary8"]["result"]["total"] == 4
    assert g["fs_zeros"]["result"]["value"] == 4
    assert g["fs_swap"]["result"]["value"] == 7 and g["fs_swap"]["result"]["seed"] == 7
    assert g["exponents_exact_k4"]["result"]["rows"][0]["fs_exponent"] == pytest.approx(5.618034, abs=1e-6)


def test_parse_error_names_the_line(monkeypatch):
    code, out, err = invoke(["compress", "malformed.fam"], monkeypatch)
    assert code == 2 and out == ""
    assert "line 3" in err


def test_duplicate_columns_rejected(monkeypatch):
    code, _, err = invoke(["pipeline", "duplicate.mat", "2"], monkeypatch)
    assert code == 2
    assert "columns 1 and 3" in err and "simple" in err


def test_budget_exit_reports_bounds(monkeypatch):
    code, out, _ = invoke(["fs-search", "--m", "4", "--pattern", "swap.pat", "--budget", "50", "--json"],
                          monkeypatch)
    assert code == 3
    res = json.loads(out)["result"]
    assert res["lower"] <= 11 <= res["upper"]


def test_missing_file(monkeypatch):
    code, _, err = invoke(["shatter", "nope.fam", "1"], monkeypatch)
    assert code == 2 and "nope.fam" in err


def test_text_output(monkeypatch):
    code, out, _ = invoke(["shatter", "power2.fam", "2"], monkeypatch)
    assert code == 0
    assert out.splitlines()[0] == "{1,2}"
    code, out, _ = invoke(["exponents", "--table", "3..4", "--mode", "exact"], monkeypatch)
    assert code == 0 and len(out.splitlines()) == 3


@pytest.mark.parametrize("name", ["fs_swap", "contributions_binary8", "exponents_exact_k4"])
def test_deterministic(name, monkeypatch):
    argv, _ = CASES[name]
    runs = [normalize(json.loads(invoke(argv + ["--json"], monkeypatch)[1])) for _ in range(2)]
    assert runs[0] == runs[1]
