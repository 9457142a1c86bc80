import itertools
import math
import random
from fractions import Fraction
from functools import reduce

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bitile import patterns
from bitile.arithmetic import (INF, bezout_bounded, compute_chi_cr, compute_hcf_family,
                               compute_parameters, compute_sigma, constants, hcf_family_of_profile,
                               reachable_imbalances,
                               threshold, zeta_beta)
from bitile.errors import DivisibilityViolation, EdgelessPattern, HcfNotOne
from bitile.graph import complete_bipartite_pattern
from bitile.oracles import brute_invariants, sigma_by_orientation

K12_K2 = patterns.union(patterns.star(2), patterns.edge())
K13_K12 = patterns.union(patterns.star(3), patterns.star(2))


@pytest.mark.parametrize("H, u, w", [
    (patterns.edge(), 1, 1),
    (K12_K2, 2, 3),
    (K13_K12, 2, 5),
])
def test_sigma_examples(H, u, w):
    assert compute_sigma(H) == u
    assert H.h - compute_sigma(H) == w


@pytest.mark.parametrize("H, value", [
    (complete_bipartite_pattern(1, 1), Fraction(2)),
    (complete_bipartite_pattern(3, 3), Fraction(2)),
    (K12_K2, Fraction(5, 3)),
    (K13_K12, Fraction(7, 5)),
])
def test_chi_cr_examples(H, value):
    assert compute_chi_cr(H) == value


def test_chi_cr_edgeless():
    with pytest.raises(EdgelessPattern):
        compute_chi_cr(patterns.isolated())


def test_hcf_examples():
    fam = compute_hcf_family(patterns.copies(patterns.edge(), 2))
    assert (fam.hcf_c, fam.D, fam.hcf_chi, fam.indicator) == (2, {0}, INF, False)
    fam = compute_hcf_family(K12_K2)
    assert (fam.hcf_c, fam.hcf_chi_c, fam.hcf_chi, fam.indicator) == (1, 1, 1, True)
    fam = compute_hcf_family(K13_K12)
    assert (fam.D, fam.hcf_chi, fam.hcf_c, fam.indicator) == ({1, 3}, 1, 1, True)


def test_no_imbalance_sentinel():
    fam = compute_hcf_family(complete_bipartite_pattern(2, 2))
    assert fam.no_imbalance and fam.hcf_chi == INF
    assert compute_parameters(complete_bipartite_pattern(2, 2)).to_json()["hcf_chi_c"] == "inf"


def test_catalog_matches_brute_force(catalog):
    assert len(catalog) >= 12
    for H in catalog.values():
        brute = brute_invariants(H)
        fam = compute_hcf_family(H)
        assert compute_sigma(H) == brute["sigma"] == sigma_by_orientation(list(H.d), H.h)
        assert fam.D == brute["D"]
        assert (fam.hcf_c, fam.hcf_chi, fam.hcf_chi_c, fam.indicator) == (
            brute["hcf_c"], brute["hcf_chi"], brute["hcf_chi_c"], brute["indicator"])
        if H.has_edges:
            assert compute_chi_cr(H) == Fraction(H.h, brute["w"])


@pytest.mark.parametrize("a, d, b", [
    ((5,), 5, (1,)),
    ((3, 2), 1, (1, -1)),
    ((4, 6), 2, (-1, 1)),
])
def test_bezout_examples(a, d, b):
    assert bezout_bounded(a) == (d, b)


def test_bezout_random_vectors():
    rng = random.Random(7)
    for _ in range(1000):
        a = [rng.randint(1, 50) for _ in range(rng.randint(1, 4))]
        g, b = bezout_bounded(a)
        assert g == reduce(math.gcd, a)
        assert sum(x * y for x, y in zip(a, b)) == g
        assert max(abs(x) for x in b) <= max(a)


def test_bezout_minimal_radius_small_cases():
    rng = random.Random(3)
    for _ in range(100):
        a = [rng.randint(1, 9) for _ in range(rng.randint(1, 3))]
        g, b = bezout_bounded(a)
        radius = max(abs(x) for x in b)
        for r in range(radius):
            # no vector with a smaller radius works
            assert not any(sum(x * y for x, y in zip(a, v)) == g
                           for v in itertools.product(range(-r, r + 1), repeat=len(a)))


def test_zeta_beta_examples():
    zb = zeta_beta(K12_K2)
    assert (zb.zeta, zb.zeta_max, zb.beta, zb.beta_max) == ((1, -1), 1, (1, 0), 1)
    zb = zeta_beta(K13_K12)
    assert zb.zeta == (1, -1)
    assert zb.beta == (0, 1)


def test_zeta_beta_identities(catalog):
    for H in catalog.values():
        if not compute_hcf_family(H).indicator:
            continue
        zb = zeta_beta(H)
        u = compute_sigma(H)
        assert sum(z * c for z, c in zip(zb.zeta, H.c)) == 1
        assert sum(b * d for b, d in zip(zb.beta, H.d)) == 1
        assert zb.zeta_max <= max(H.c) <= H.h
        assert zb.beta_max <= max(H.d) <= H.h - 2 * u
        assert all(b == 0 for b, d in zip(zb.beta, H.d) if d == 0)


def test_zeta_requires_hcf_one():
    with pytest.raises(HcfNotOne):
        zeta_beta(patterns.copies(patterns.edge(), 2))


def test_constants_examples():
    k = constants(K12_K2)
    assert k.c1 == Fraction(65, 2) and k.c1_ceil == 33
    assert k.c1 <= 4 * 5 ** 3
    assert k.c2_bound == 200
    # 49 + 9 + 9/2 * 3 + 5
    assert constants(K13_K12).c1 == Fraction(153, 2)


def test_constant_bounds(catalog):
    for H in catalog.values():
        if compute_hcf_family(H).indicator:
            k = constants(H)
            assert k.c1 <= 4 * H.h ** 3
            assert k.c1_ceil == math.ceil(k.c1)
        p = compute_parameters(H)
        assert p.c2_bound == 8 * H.h ** 2
        assert p.c2_extremal < p.c2_bound


def test_threshold_examples():
    th = threshold(K12_K2, 100)
    assert (th.value, th.regime) == (73, "CriticalChromatic")
    th = threshold(complete_bipartite_pattern(2, 2), 100)
    assert (th.value, th.regime) == (54, "ZhaoExact")
    th = threshold(patterns.copies(patterns.edge(), 2), 10)
    assert (th.value, th.lower_bound) == (9, 4)
    with pytest.raises(DivisibilityViolation):
        threshold(K12_K2, 7)


def test_connected_patterns_never_hcf_one(catalog):
    for H in catalog.values():
        if H.k_c == 1 and H.h >= 2:
            fam = compute_hcf_family(H)
            assert fam.hcf_c == H.h and not fam.indicator


def test_parameters_report_fields(catalog):
    for H in catalog.values():
        report = compute_parameters(H).to_json()
        for key in ("u", "w", "chi_cr", "hcf_c", "hcf_chi", "hcf_chi_c", "hcf_indicator", "D",
                    "zeta", "beta", "c1", "c1_ceil", "c2_bound"):
            assert key in report


def random_profile(rng):
    c = [rng.randint(1, 30) for _ in range(rng.randint(1, 6))]
    d = [rng.randrange(ci % 2, ci + 1, 2) for ci in c]
    return c, d


def lemma_parts_hold(c, d):
    fam = hcf_family_of_profile(c, d)
    if any(d):
        assert fam.hcf_chi_c <= fam.hcf_chi <= 2 * fam.hcf_chi_c
    if fam.hcf_chi_c == 2:
        assert fam.hcf_c >= 2
    if fam.hcf_c == 1:
        assert (fam.hcf_chi <= 2) == (fam.hcf_chi_c == 1)


def test_component_profile_lemma_10k():
    rng = random.Random(2024)
    for _ in range(10_000):
        lemma_parts_hold(*random_profile(rng))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 30), st.integers(0, 15)), min_size=1, max_size=6))
def test_component_profile_lemma_property(raw):
    c = [ci for ci, _ in raw]
    d = [min(ci, 2 * k + ci % 2) for ci, k in raw]
    lemma_parts_hold(c, d)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=1, max_size=6))
def test_sigma_matches_orientations(d):
    h = sum(d) + 2 * len(d)
    widest = max(abs(s) for s in reachable_imbalances(d))
    assert (h - widest) // 2 == sigma_by_orientation(list(d), h)
