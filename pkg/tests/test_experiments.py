import csv
import io
import json
import random

import pytest

from bitile import scan_threshold
from bitile.errors import DivisibilityViolation
from bitile.experiments import CSV_COLUMNS, build_chain, lift, regime_table, scan_row, verify_tightness
from bitile.graph import HostGraph


@pytest.fixture(scope="module")
def k12_k2_scan(catalog):
    return scan_threshold(catalog["K1,2+K2"], [10, 15, 20], seed=0)


def test_scan_clears_witness(k12_k2_scan):
    rows = {r.n: r for r in k12_k2_scan.rows}
    assert rows[10].empirical >= 4 and rows[10].witness_delta == 3
    for row in k12_k2_scan.rows:
        assert not row.inconclusive
        assert row.empirical >= row.witness_delta + 1
        assert row.empirical <= row.n


def test_scan_frontier_has_no_factor(k12_k2_scan, catalog):
    from bitile import has_h_factor

    for row in k12_k2_scan.rows:
        assert row.frontier.min_degree >= row.empirical - 1
        assert not has_h_factor(row.frontier, catalog["K1,2+K2"])


def test_scan_predictions(k12_k2_scan):
    row = k12_k2_scan.rows[0]
    assert row.predicted_critical == 4 + 33
    assert row.predicted_upper * 2 == 10 + 15 - 4
    assert row.gap_critical == row.predicted_critical - row.empirical


def test_square_pattern_tracks_half(catalog):
    report = scan_threshold(catalog["K2,2"], [4, 6, 8, 10])
    for row in report.rows:
        assert row.predicted_critical is None
        assert row.n // 2 <= row.empirical <= row.predicted_upper


def test_empty_grid(catalog):
    report = scan_threshold(catalog["K2"], [])
    assert report.rows == () and report.to_csv().strip() == ",".join(CSV_COLUMNS)


def test_grid_divisibility(catalog):
    with pytest.raises(DivisibilityViolation):
        scan_threshold(catalog["K1,2+K2"], [10, 11])


def test_scan_outputs(k12_k2_scan):
    rows = list(csv.DictReader(io.StringIO(k12_k2_scan.to_csv())))
    assert [int(r["n"]) for r in rows] == [10, 15, 20]
    assert tuple(rows[0]) == CSV_COLUMNS
    doc = json.loads(json.dumps(k12_k2_scan.to_json()))
    assert doc["family"]["random_chains"] == 3 and "lower bounds" in doc["note"]
    assert doc["rows"][0]["seed"] == "0:10"
    assert doc["rows"][0]["frontier"]["n"] == 10


def test_scan_deterministic(catalog):
    H = catalog["K1,2+K2"]
    one = scan_row(H, 10, seed=5)
    assert one == scan_row(H, 10, seed=5)
    assert one.frontier.to_json() == scan_row(H, 10, seed=5).frontier.to_json()


def test_parallel_rows_match(catalog):
    H = catalog["K1,3"]
    grid = [4, 6, 8]
    assert scan_threshold(H, grid, workers=2).rows == scan_threshold(H, grid).rows


def test_chain_is_nested_and_lifted():
    rng = random.Random(1)
    chain = build_chain(HostGraph.empty(7, 7), rng)
    for d, G in enumerate(chain):
        assert G.min_degree >= d
        if d:
            assert set(chain[d - 1].edges()) <= set(G.edges())
    assert lift(chain[3], 2, rng) == chain[3]


def test_tightness_every_catalog_pattern(catalog):
    for name, H in catalog.items():
        rows = verify_tightness(H, max_vertices=20)
        assert rows, name
        assert all(r.ok for r in rows), name


def test_regime_table(catalog):
    table = {r["pattern"]: r for r in regime_table(catalog)}
    assert table["K1,2+K2"]["leading_coefficient"] == "2/5"
    assert table["K1,3+K1,2"]["regime"] == "critical-chromatic"
    assert table["K2,2"]["leading_coefficient"] == "1/2"
    assert table["C6"]["regime"] == "half"
