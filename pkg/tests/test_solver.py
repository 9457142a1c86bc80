import random

import pytest
from corpus import fact_hosts, random_host, tiny_corpus

from bitile import patterns
from bitile.complete import factor_complete
from bitile.constructions import extremal_construction
from bitile.errors import BudgetExceeded, DivisibilityViolation
from bitile.graph import HostGraph, complete_bipartite_pattern
from bitile.oracles import brute_embeddings, naive_max_tiling
from bitile.solver import (BACKENDS, SolveBudget, build_problem, embedding_catalog, has_h_factor,
                           max_h_tiling, max_matching, solve_factor, twin_classes, validate_tiling)
from bitile.tiling import Piece, TilingAssignment

K12_K2 = patterns.union(patterns.star(2), patterns.edge())
K12_K12 = patterns.union(patterns.star(2), patterns.star(2))


def test_perfect_matching():
    result = max_h_tiling(HostGraph.complete(2, 2), patterns.edge())
    assert result.copies == 2 and result.optimal


def test_case_four_witness_max_tiling():
    G = extremal_construction(K12_K2, 4).host
    result = max_h_tiling(G, K12_K2)
    assert result.optimal and result.copies == 3
    assert validate_tiling(G, K12_K2, result.assignment).ok


def test_complete_host_factor():
    G = HostGraph.complete(8, 12)
    result = max_h_tiling(G, K12_K2)
    assert result.copies == 4 and result.assignment.perfect
    assert validate_tiling(G, K12_K2, factor_complete(K12_K2, 4, 0)).ok


@pytest.mark.parametrize("u, w", [(1, 2), (1, 3), (2, 3)])
def test_natural_factor_exists(u, w):
    assert has_h_factor(HostGraph.complete(3 * u, 3 * w), complete_bipartite_pattern(u, w))


def test_case_one_witness_no_factor():
    assert not has_h_factor(extremal_construction(K12_K12, 1).host, K12_K12)


def test_witness_plus_frontier_edges():
    from bitile.experiments import scan_row

    row = scan_row(K12_K2, 10, chains=2, seed=3)
    assert not has_h_factor(extremal_construction(K12_K2, 4).host, K12_K2)
    assert row.empirical >= row.witness_delta + 1
    assert not has_h_factor(row.frontier, K12_K2)


def test_factor_divisibility():
    with pytest.raises(DivisibilityViolation):
        solve_factor(HostGraph.complete(3, 3), K12_K2)


def test_side_count_shortcut():
    # every copy of K1,2+K2 puts 2 or 3 vertices in X; 2 copies need 4..6 X vertices
    result = solve_factor(HostGraph.complete(3, 7), K12_K2)
    assert result.decision is False and result.nodes == 0


def test_matching_examples():
    c6 = HostGraph.from_edges(3, 3, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)])
    assert c6.min_degree == 2 and max_matching(c6)[0] == 3
    assert max_matching(HostGraph.complete(3, 3))[0] == 3
    assert max_matching(HostGraph.empty(3, 3)) == (0, [])


def test_matching_pairs_are_edges():
    rng = random.Random(5)
    for _ in range(50):
        G = random_host(rng, 7, 9, 0.3)
        size, pairs = max_matching(G)
        assert len(pairs) == size == len({x for x, _ in pairs}) == len({y for _, y in pairs})
        assert all(G.has_edge(x, y) for x, y in pairs)


def test_matching_bound_unbalanced():
    rng = random.Random(8)
    for _ in range(300):
        ny = rng.randint(1, 12)
        nx = rng.randint(1, ny)
        G = random_host(rng, nx, ny, rng.random())
        assert max_matching(G)[0] >= min(2 * G.min_degree, nx)


def test_matching_bound_balanced():
    for G in fact_hosts():
        assert max_matching(G)[0] >= min(2 * G.min_degree, G.nx)


def test_validator_disjointness():
    G = HostGraph.complete(2, 2)
    H = patterns.edge()
    bad = TilingAssignment(H, (Piece(0, 0, False, (0,), (0,)), Piece(1, 0, False, (0,), (1,))),
                           (1,), ())
    assert validate_tiling(G, H, bad).status == "DisjointnessViolation"


def test_validator_non_edge():
    G = HostGraph.from_edges(2, 2, [(0, 0), (1, 1)])
    H = patterns.edge()
    bad = TilingAssignment(H, (Piece(0, 0, False, (0,), (1,)), Piece(1, 0, False, (1,), (0,))))
    assert validate_tiling(G, H, bad).status == "EmbeddingViolation"


def test_validator_leftover_accounting():
    G = HostGraph.complete(2, 2)
    H = patterns.edge()
    bad = TilingAssignment(H, (Piece(0, 0, False, (0,), (0,)),))
    assert validate_tiling(G, H, bad).status == "LeftoverMismatch"


def test_oracle_agreement_sample():
    for name, H, G in tiny_corpus()[::7]:
        assert max_h_tiling(G, H).copies == naive_max_tiling(G, H), name


def test_backends_agree():
    assert "python" in BACKENDS
    rng = random.Random(21)
    for name in ("K1,2+K2", "K2,2", "P4", "K1,3+K1"):
        H = patterns.get(name)
        for _ in range(6):
            G = random_host(rng, 9, 9, 0.45)
            values = {b: max_h_tiling(G, H, backend=b).copies for b in BACKENDS}
            assert len(set(values.values())) == 1, (name, values)
            if (G.nx + G.ny) % H.h == 0:
                decisions = {b: solve_factor(G, H, backend=b).decision for b in BACKENDS}
                assert len(set(decisions.values())) == 1


def test_parallel_workers_agree():
    rng = random.Random(4)
    G = random_host(rng, 10, 10, 0.5)
    one = max_h_tiling(G, K12_K2, SolveBudget(workers=1)).copies
    two = max_h_tiling(G, K12_K2, SolveBudget(workers=2)).copies
    assert one == two
    assert solve_factor(G, K12_K2, SolveBudget(workers=2)).decision == \
        solve_factor(G, K12_K2).decision


def test_budget_exhaustion():
    rng = random.Random(9)
    G = random_host(rng, 10, 10, 0.5)
    result = max_h_tiling(G, K12_K2, SolveBudget(node_limit=1))
    assert not result.optimal
    with pytest.raises(BudgetExceeded) as info:
        max_h_tiling(G, K12_K2, SolveBudget(node_limit=1), strict=True)
    assert info.value.incumbent is not None
    with pytest.raises(ValueError):
        SolveBudget(node_limit=0)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("BITILE_BUDGET_SECS", "7.5")
    assert SolveBudget().time_limit == 7.5


def test_catalog_matches_brute_embeddings():
    rng = random.Random(13)
    for name in ("K1,2+K2", "P4", "K2,2", "C6", "K1,3+K1"):
        H = patterns.get(name)
        for nx, ny in ((4, 4), (5, 6)):
            G = random_host(rng, nx, ny, 0.6)
            for i in range(H.k_c):
                assert embedding_catalog(G, H, i) == brute_embeddings(G, H, i), (name, i)


def test_twin_classes_partition():
    G = HostGraph.complete(3, 4)
    classes = twin_classes(G)
    assert sorted(len(c) for c in classes.members) == [3, 4]
    problem = build_problem(extremal_construction(K12_K2, 4).host, K12_K2)
    assert problem.max_copies == 4


def test_monotone_under_edge_addition():
    rng = random.Random(17)
    for name in ("K1,2+K2", "K2,2"):
        H = patterns.get(name)
        G = random_host(rng, 8, 8, 0.15)
        last = max_h_tiling(G, H).copies
        missing = [(x, y) for x in range(8) for y in range(8) if not G.has_edge(x, y)]
        rng.shuffle(missing)
        for e in missing[:25]:
            G = G.with_edges([e])
            now = max_h_tiling(G, H).copies
            assert now >= last
            last = now


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_imbalanced_blocks_refuted_at_root(backend):
    # each block needs six off-balance components, a copy holds one
    G = extremal_construction(K12_K2, 8).host
    result = solve_factor(G, K12_K2, backend=backend)
    assert result.decision is False and result.nodes <= 2
    rng = random.Random(6)
    thinned = G.without_edges([e for e in G.edges() if rng.random() < 0.3])
    assert solve_factor(thinned, K12_K2, backend=backend).nodes <= 2
