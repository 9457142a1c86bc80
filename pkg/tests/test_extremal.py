import random
from fractions import Fraction

import pytest

from bitile import (DenseEmbedConfig, HostGraph, classify_extremal, compute_sigma, constants, tile_extremal,
                    validate_tiling)
from bitile.errors import HcfNotOne, NotExtremal, PipelineStageFailed, PreconditionViolated, Unbalanced
from bitile.extremal import near_extremal_host

THETA = Fraction(9, 20)


def two_blocks(small, large):
    n = small + large
    edges = [(x, y) for x in range(small) for y in range(large)]
    edges += [(x, y) for x in range(small, n) for y in range(large, n)]
    return HostGraph.from_edges(n, n, edges)


def test_classify_two_blocks(catalog):
    G = two_blocks(8, 12)
    part = classify_extremal(G, catalog["K1,2+K2"], range(8, 20), range(12), THETA, THETA)
    assert part.density == 0
    assert set(part.A1) >= set(range(8, 20)) and set(part.A2) >= set(range(8))
    assert set(part.B1) >= set(range(12)) and set(part.B2) >= set(range(12, 20))
    assert not part.A0 and not part.B0


def test_classify_perturbed_witness(catalog):
    H = catalog["K1,2+K2"]
    n = 100
    G = two_blocks(39, 61)
    alpha = Fraction(1, 5)
    rng = random.Random(3)
    extra = [(rng.randrange(39, 100), rng.randrange(61)) for _ in range(int(alpha ** 3 * n))]
    G = G.with_edges(extra)
    part = classify_extremal(G, H, range(39, 99), range(60), alpha, THETA)
    assert len(part.A1) >= (1 - alpha ** Fraction(2, 3)) * 60
    assert part.all_checks_hold


def test_classify_complete_host_not_extremal(catalog):
    with pytest.raises(NotExtremal):
        classify_extremal(HostGraph.complete(10, 10), catalog["K1,2+K2"], range(6), range(6), THETA, THETA)


def test_classify_preconditions(catalog):
    H = catalog["K1,2+K2"]
    with pytest.raises(PreconditionViolated):
        classify_extremal(HostGraph.empty(10, 10), H, range(5), range(6), THETA, THETA)
    with pytest.raises(PreconditionViolated):
        classify_extremal(HostGraph.empty(10, 10), H, range(6), range(6), THETA, Fraction(1, 2))
    with pytest.raises(Unbalanced):
        classify_extremal(HostGraph.empty(10, 11), H, range(6), range(6), THETA, THETA)


def test_two_blocks_tile_without_gate(catalog):
    H = catalog["K1,2+K2"]
    G = two_blocks(8, 12)
    tiling = tile_extremal(G, H, range(8, 20), range(12), check_degree=False)
    assert tiling.perfect and validate_tiling(G, H, tiling).ok
    assert len(tiling.copy_ids) == 8


def test_degree_gate(catalog):
    with pytest.raises(PreconditionViolated) as info:
        tile_extremal(two_blocks(8, 12), catalog["K1,2+K2"], range(8, 20), range(12))
    assert info.value.stage == "gate"


def test_hcf_not_one_refused(catalog):
    G = HostGraph.complete(8, 8)
    with pytest.raises(HcfNotOne):
        tile_extremal(G, catalog["K2,2"], range(4), range(4))


@pytest.mark.parametrize("name,n", [("K1,2+K2", 145), ("K1,2+K2", 200), ("K1,3+K1,2", 301),
                                    ("K1,2+K1", 130), ("K1,2+K1", 190)])
def test_near_extremal_hosts(catalog, name, n):
    H = catalog[name]
    for seed in range(3):
        G, A, B = near_extremal_host(H, n, seed)
        assert G.min_degree >= Fraction(compute_sigma(H) * n, H.h) + constants(H).c1_ceil
        tiling = tile_extremal(G, H, A, B)
        assert tiling.perfect and validate_tiling(G, H, tiling).ok
        stages = [step["stage"] for step in tiling.meta["trace"]]
        assert stages[0] == "classify"
        assert ("odd-m" in stages) == bool((2 * n // H.h) % 2)


def test_near_extremal_host_too_small(catalog):
    with pytest.raises(PreconditionViolated):
        near_extremal_host(catalog["K1,2+K1,2+K2"], 100)


def test_trace_is_deterministic(catalog):
    H = catalog["K1,2+K2"]
    G, A, B = near_extremal_host(H, 145, 4)
    assert tile_extremal(G, H, A, B).to_json() == tile_extremal(G, H, A, B).to_json()


def test_config_validation(catalog):
    H = catalog["K1,2+K2"]
    config = DenseEmbedConfig.for_pattern(H)
    assert config.rho == Fraction(1, 20) and config.alpha == config.theta == THETA
    exact = DenseEmbedConfig.asymptotic(H)
    assert exact.theta == Fraction(1, 200) and exact.alpha == exact.theta ** 3
    with pytest.raises(PreconditionViolated):
        DenseEmbedConfig(Fraction(0), THETA, THETA)
    with pytest.raises(PreconditionViolated):
        DenseEmbedConfig(Fraction(1, 2), THETA, Fraction(1, 2))


def test_asymptotic_config_fails_at_desk_scale(catalog):
    H = catalog["K1,2+K2"]
    G, A, B = near_extremal_host(H, 145, 0)
    with pytest.raises((NotExtremal, PipelineStageFailed)):
        tile_extremal(G, H, A, B, DenseEmbedConfig.asymptotic(H))
