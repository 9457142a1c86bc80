import pytest

from bitile import patterns
from bitile.arithmetic import compute_sigma, threshold
from bitile.constructions import (admissible_m, classify_case, extremal_construction, host_sigma,
                                  verify_no_factor)
from bitile.errors import DivisibilityViolation, InstanceTooLarge
from bitile.experiments import verify_tightness

K12_K2 = patterns.union(patterns.star(2), patterns.edge())
K12_K12 = patterns.union(patterns.star(2), patterns.star(2))


def test_case_four_example():
    w = extremal_construction(K12_K2, 4)
    assert (w.case, w.n, w.blocks, w.claimed_delta) == ("HcfOne", 10, ((3, 7), (7, 3)), 3)
    assert w.host.min_degree == 3


def test_case_two_odd_n():
    w = extremal_construction(patterns.edge(), 5)
    assert (w.case, w.n, w.blocks, w.claimed_delta) == ("HcfC2", 5, ((3, 2), (2, 3)), 2)
    w = extremal_construction(patterns.copies(patterns.edge(), 3), 1)
    assert (w.case, w.n, w.blocks, w.claimed_delta) == ("HcfC2", 3, ((2, 1), (1, 2)), 1)


def test_case_two_even_n_is_unbalanced_per_block():
    w = extremal_construction(patterns.copies(patterns.edge(), 2), 2)
    assert w.blocks == ((2, 3), (2, 1))
    assert w.claimed_delta == 1


def test_case_one_example():
    w = extremal_construction(K12_K12, 1)
    assert (w.case, w.n, w.blocks, w.claimed_delta) == ("HcfC3plus", 3, ((2, 2), (1, 1)), 1)


def test_case_three_example():
    H = patterns.union(patterns.star(4), patterns.edge())
    assert classify_case(H) == "HcfChi3"
    w = extremal_construction(H, 2)
    assert w.blocks == ((4, 3), (3, 4))
    assert w.host.min_degree == w.claimed_delta == 3


def test_divisibility():
    with pytest.raises(DivisibilityViolation):
        extremal_construction(K12_K2, 3)
    with pytest.raises(DivisibilityViolation):
        extremal_construction(K12_K2, 1)
    assert admissible_m(K12_K2, 12) == [2, 4, 6, 8, 10, 12]


def test_verify_examples():
    assert verify_no_factor(extremal_construction(K12_K2, 4), K12_K2).has_factor is False
    assert verify_no_factor(extremal_construction(K12_K12, 1), K12_K12).has_factor is False


def test_verify_too_large_reports_analytic():
    w = extremal_construction(K12_K2, 10)
    with pytest.raises(InstanceTooLarge) as info:
        verify_no_factor(w, K12_K2, max_vertices=40)
    assert info.value.report.has_factor is None
    assert info.value.report.analytic["sigma_G"] == info.value.report.analytic["mu"] - 2


def test_case_four_sigma_deficit(catalog):
    for H in catalog.values():
        if classify_case(H) != "HcfOne":
            continue
        for m in admissible_m(H, 8):
            w = extremal_construction(H, m)
            assert host_sigma(w.host) == m * compute_sigma(H) - 2


def test_claimed_delta_matches_lower_bound(catalog):
    for H in catalog.values():
        for m in admissible_m(H, 8):
            w = extremal_construction(H, m)
            assert w.host.min_degree == w.claimed_delta == threshold(H, w.n).lower_bound


def test_tightness_grid(catalog):
    failures = []
    for name, H in catalog.items():
        for row in verify_tightness(H, 28):
            if not row.ok:
                failures.append((name, row.to_json()))
    assert failures == []


def test_witness_json(catalog):
    data = extremal_construction(K12_K2, 4).to_json()
    assert data["host"]["n"] == 10 and data["case"] == "HcfOne"
