import json

import pytest

from bitile import HostGraph
from bitile.cli import _budget, main, parse_args, parse_ids
from bitile.extremal import near_extremal_host


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out.strip() else None, err


@pytest.fixture
def pattern_file(tmp_path, catalog):
    path = tmp_path / "pattern.json"
    path.write_text(json.dumps(catalog["K1,2+K2"].to_json()))
    return path


def test_parse_ids():
    assert parse_ids("0,1,5-8") == [0, 1, 5, 6, 7, 8]
    assert parse_ids("") == []


def test_analyze(capsys, pattern_file):
    code, doc, _ = run_json(capsys, "analyze", pattern_file, "--n", 10)
    assert code == 0
    assert doc["u"] == 2 and doc["w"] == 3 and doc["threshold"]["n"] == 10


def test_analyze_dot(capsys):
    code, out, _ = run(capsys, "analyze", "catalog:C6", "--format", "dot")
    assert code == 0 and out.lstrip().startswith("graph")


def test_missing_file_names_path(capsys, tmp_path):
    missing = tmp_path / "nope.json"
    code, out, err = run(capsys, "analyze", missing)
    assert code == 2 and str(missing) in err and out == ""


def test_usage_errors(capsys):
    assert run(capsys, "construct", "catalog:K2")[0] == 2
    code, _, err = run(capsys, "tile-complete", "catalog:K1,2+K2", "--m", "x", "--t", 1)
    assert code == 2 and "--m" in err
    assert run(capsys, "analyze", "catalog:NoSuchPattern")[0] == 2
    assert run(capsys, "tile-complete", "catalog:K1,2+K2", "--m", 4, "--t", 2, "--format", "csv")[0] == 2
    assert run(capsys)[0] == 2


def test_domain_error_json(capsys):
    code, doc, _ = run_json(capsys, "construct", "catalog:K1,2+K2", "--m", 3)
    assert code == 1
    assert doc["error"] == "DivisibilityViolation" and doc["stage"] is None
    assert "smallest valid m >= 3 is 4" in doc["detail"]


def test_construct_feeds_solve(capsys, tmp_path, pattern_file):
    witness = tmp_path / "witness.json"
    code, _, _ = run(capsys, "construct", pattern_file, "--m", 4, "--verify", "-o", witness)
    assert code == 0
    doc = json.loads(witness.read_text())
    assert doc["verification"]["has_factor"] is False
    code, doc, _ = run_json(capsys, "solve", witness, pattern_file, "--factor")
    assert code == 0 and doc["decision"] is False
    code, doc, _ = run_json(capsys, "solve", witness, pattern_file, "--max", "--backend", "python")
    assert code == 0 and doc["copies"] == 3


def test_tile_complete_and_almost(capsys):
    code, doc, _ = run_json(capsys, "tile-complete", "catalog:K1,2+K2", "--m", 4, "--t", 2)
    assert code == 0 and not doc["leftover_X"] and not doc["leftover_Y"]
    code, doc, _ = run_json(capsys, "almost-tile", "--u", 1, "--w", 2, "--x", 10, "--y", 13)
    assert code == 0 and "report" in doc
    code, doc, _ = run_json(capsys, "almost-tile", "--u", 1, "--w", 2, "--m", 6, "--c", 2)
    assert code == 0
    assert run(capsys, "almost-tile", "--u", 1, "--w", 2)[0] == 2


def test_tile_extremal_deterministic(capsys, tmp_path, catalog):
    G, A, B = near_extremal_host(catalog["K1,2+K2"], 145, seed=2)
    host = tmp_path / "host.json"
    host.write_text(json.dumps(G.to_json()))
    argv = ["tile-extremal", host, "catalog:K1,2+K2", "--A", ",".join(map(str, A)),
            "--B", ",".join(map(str, B))]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    assert run(capsys, *argv)[1] == first
    doc = json.loads(first)
    assert not doc["leftover_X"] and doc["meta"]["trace"][0]["stage"] == "classify"


def test_tile_extremal_gate(capsys, tmp_path):
    host = tmp_path / "host.json"
    host.write_text(json.dumps(HostGraph.complete(10, 10).to_json()))
    code, doc, _ = run_json(capsys, "tile-extremal", host, "catalog:K1,2+K2", "--A", "0-5", "--B", "0-5")
    assert code == 1 and doc["stage"] == "gate"


def test_check_regular_modes(capsys, tmp_path):
    host = tmp_path / "host.json"
    host.write_text(json.dumps(HostGraph.complete(6, 6).to_json()))
    code, doc, _ = run_json(capsys, "check-regular", host, "--X", "0-5", "--Y", "0-5", "--eps", "0.2")
    assert code == 0 and doc["verdict"] == "Regular"
    code, doc, _ = run_json(capsys, "check-regular", host, "--X", "0-5", "--Y", "0-5", "--eps", "1/5",
                            "--trials", 100)
    assert code == 0
    code, doc, _ = run_json(capsys, "check-regular", host, "--X", "0-5", "--Y", "0-5", "--eps", "0.2",
                            "--delta", "0.5")
    assert code == 0 and doc["verdict"] == "SuperRegular"


def test_scan_artifacts(capsys, tmp_path):
    out_dir = tmp_path / "scan"
    code, doc, _ = run_json(capsys, "scan", "catalog:K1,2+K2", "--n-grid", "5,10", "--seed", 3,
                            "--out-dir", out_dir, "--dot")
    assert code == 0 and [r["n"] for r in doc["rows"]] == [5, 10]
    assert json.loads((out_dir / "scan.json").read_text()) == doc
    assert (out_dir / "scan.csv").read_text().splitlines()[0].startswith("n,m,empirical")
    assert (out_dir / "frontier_n10.dot").exists()
    code, csv_text, _ = run(capsys, "scan", "catalog:K1,2+K2", "--n-grid", "5,10", "--seed", 3,
                            "--format", "csv")
    assert code == 0 and csv_text == (out_dir / "scan.csv").read_text()


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# tiling run\nm = 4\nt = 2\n")
    code, doc, _ = run_json(capsys, "tile-complete", "catalog:K1,2+K2", "--config", cfg)
    assert code == 0 and len({p["copy"] for p in doc["copies"]}) == 4
    # explicit flags win over the file
    code, doc, _ = run_json(capsys, "tile-complete", "catalog:K1,2+K2", "--config", cfg, "--m", 2, "--t", 1)
    assert code == 0 and len({p["copy"] for p in doc["copies"]}) == 2
    cfg.write_text("bogus = 1\n")
    assert run(capsys, "tile-complete", "catalog:K1,2+K2", "--config", cfg)[0] == 2


def test_budget_precedence(monkeypatch):
    argv = ["solve", "host.json", "catalog:K2"]
    monkeypatch.delenv("BITILE_BUDGET_SECS", raising=False)
    assert _budget(parse_args(argv)).time_limit == 60
    monkeypatch.setenv("BITILE_BUDGET_SECS", "7.5")
    assert _budget(parse_args(argv)).time_limit == 7.5
    assert _budget(parse_args(argv + ["--budget-secs", "3"])).time_limit == 3
