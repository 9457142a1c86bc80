import itertools
from fractions import Fraction

import pytest

from bitile import patterns
from bitile.arithmetic import beta_coefficients, compute_hcf_family, compute_sigma
from bitile.complete import (factor_complete, feasible_corollary, kuw_almost_tiling,
                             kuw_deficit_tiling, swap_plan)
from bitile.errors import PreconditionViolated, RatioViolation
from bitile.graph import HostGraph, complete_bipartite_pattern, disjoint_union
from bitile.solver import has_h_factor, validate_tiling
from bitile.tiling import kuw_pattern

K12_K2 = patterns.union(patterns.star(2), patterns.edge())
K13_K12 = patterns.union(patterns.star(3), patterns.star(2))


def host_for(H, m, t):
    u = compute_sigma(H)
    return HostGraph.complete(m * u + t, m * (H.h - u) - t)


def fully_swapped(result):
    by_copy = {}
    for p in result.pieces:
        by_copy.setdefault(p.copy, []).append(p.swapped)
    return sum(all(flags) for flags in by_copy.values())


def test_natural_factor():
    result = factor_complete(K12_K2, 4, 0)
    assert result.num_copies == 4 and fully_swapped(result) == 0
    assert validate_tiling(HostGraph.complete(8, 12), K12_K2, result).ok


def test_one_swapped_copy():
    result = factor_complete(K12_K2, 4, 1)
    assert fully_swapped(result) == 1
    G = HostGraph.complete(9, 11)
    assert validate_tiling(G, K12_K2, result).ok
    assert has_h_factor(G, K12_K2)


def test_component_swaps():
    assert beta_coefficients(K13_K12) == (0, 1)
    result = factor_complete(K13_K12, 6, 4)
    assert result.meta["q"] == 1 and result.meta["r"] == 1
    G = HostGraph.complete(16, 26)
    assert validate_tiling(G, K13_K12, result).ok
    assert has_h_factor(G, K13_K12)


def test_precondition_names_inequality():
    with pytest.raises(PreconditionViolated, match="q >= r\\*beta"):
        factor_complete(K13_K12, 6, 2, mirror=False)
    with pytest.raises(PreconditionViolated, match="outside"):
        factor_complete(K12_K2, 4, 5)


def test_mirror_handles_far_side():
    # t = 2 has q = 0 < r*beta; the mirrored t = 16 meets both inequalities
    result = factor_complete(K13_K12, 6, 2)
    assert result.meta["mirrored"]
    assert validate_tiling(host_for(K13_K12, 6, 2), K13_K12, result).ok


def grid_patterns(u, w):
    """Unions of complete bipartite pieces with smallest class ``u`` and ``hcf_chi_c = 1``."""
    pieces = [(0, 1)] + [(a, b) for b in range(1, w + 1) for a in range(1, b + 1) if a + b <= u + w]
    found = {}
    for k in range(1, 4):
        for combo in itertools.combinations_with_replacement(pieces, k):
            if sum(a + b for a, b in combo) != u + w:
                continue
            parts = [patterns.isolated() if a == 0 else complete_bipartite_pattern(a, b)
                     for a, b in combo]
            H = disjoint_union(*parts)
            if compute_sigma(H) == u and compute_hcf_family(H).hcf_chi_c == 1:
                found[combo] = H
    return list(found.values())


def test_complete_grid():
    failures, solver_checks, points = [], 0, 0
    for w in range(2, 5):
        for u in range(1, w):
            Hs = grid_patterns(u, w)
            assert Hs, (u, w)
            for H in Hs:
                beta = max(abs(b) for b in beta_coefficients(H))
                for m in range(1, 11):
                    for t in range(0, m * (w - u) + 1):
                        q, r = divmod(t, w - u)
                        if not (m >= r * beta + q and q >= r * beta):
                            continue
                        points += 1
                        result = factor_complete(H, m, t, mirror=False)
                        G = host_for(H, m, t)
                        report = validate_tiling(G, H, result)
                        if not (report.ok and result.perfect):
                            failures.append((u, w, H.c, m, t, report.status))
                        if 2 * m * H.h <= 48 and m * H.h <= 24:
                            solver_checks += 1
                            if not has_h_factor(G, H):
                                failures.append((u, w, H.c, m, t, "solver"))
    assert failures == []
    assert points > 100 and solver_checks > 20


def test_swap_stage_needs_enough_copies():
    # q < r*beta: stage (iii) would swap back more copies than are fully swapped
    H = K13_K12
    plan = swap_plan(H, 6, 4)
    assert sum(all(row) for row in plan) == 1
    with pytest.raises(PreconditionViolated):
        factor_complete(H, 6, 1, mirror=False)


def test_feasible_corollary_examples():
    f = feasible_corollary(K12_K2, 44, 56, Fraction(1, 10))
    assert f.feasible and f.m == 20
    assert f.window_low == Fraction(11, 15)
    assert f.m_bound == Fraction(26, 3)
    f = feasible_corollary(K12_K2, 40, 60, Fraction(1, 10))
    assert not f.feasible and f.reason == "ratio outside window"
    with pytest.raises(PreconditionViolated):
        feasible_corollary(K12_K2, 44, 56, Fraction(1, 2))


def test_feasible_points_build():
    for x in range(20, 51):
        y = 100 - x
        f = feasible_corollary(K12_K2, x, y, Fraction(1, 10))
        if f.feasible:
            result = factor_complete(K12_K2, f.m, f.t)
            assert validate_tiling(HostGraph.complete(x, y), K12_K2, result).ok


@pytest.mark.parametrize("x, y, lx, ly, w_in_y", [
    (5, 7, 0, 0, 3),
    (5, 6, 0, 2, None),
])
def test_almost_tiling_examples(x, y, lx, ly, w_in_y):
    result, report = kuw_almost_tiling(1, 2, x, y)
    assert (report.l_X, report.l_Y) == (lx, ly)
    if w_in_y is not None:
        assert report.copies_w_in_Y == w_in_y and report.m == 4
    assert validate_tiling(HostGraph.complete(x, y), kuw_pattern(1, 2), result).ok


def test_almost_tiling_square():
    result, report = kuw_almost_tiling(1, 2, 4, 4)
    assert report.total <= 2
    assert validate_tiling(HostGraph.complete(4, 4), kuw_pattern(1, 2), result).ok


def test_almost_tiling_ratio_error():
    with pytest.raises(RatioViolation):
        kuw_almost_tiling(1, 2, 2, 7)


def test_deficit_examples():
    result, report = kuw_deficit_tiling(1, 2, 5, 1)
    assert (report.p, report.q, result.num_copies, report.total) == (1, 0, 4, 3)
    result, report = kuw_deficit_tiling(2, 3, 4, 1)
    assert (report.p, report.q, result.num_copies) == (0, 1, 3)
    assert (report.l_X, report.l_Y, report.total) == (1, 4, 5)
    result, report = kuw_deficit_tiling(2, 3, 4, 0)
    assert report.total == 0
    with pytest.raises(PreconditionViolated):
        kuw_deficit_tiling(2, 3, 4, 4)


def test_almost_tiling_grid():
    violations = []
    for w in range(2, 6):
        for u in range(1, w):
            h = u + w
            H = kuw_pattern(u, w)
            for y in range(1, 61):
                for x in range(1, y + 1):
                    if Fraction(x, y) < Fraction(u, w):
                        continue
                    result, report = kuw_almost_tiling(u, w, x, y)
                    if report.total > h + (w - u) - 2:
                        violations.append(("part1", u, w, x, y, report.total))
                    if report.copies_w_in_Y < report.m / 2 - h:
                        violations.append(("orientation", u, w, x, y))
                    if len(result.used_X()) + report.l_X != x or len(result.used_Y()) + report.l_Y != y:
                        violations.append(("accounting", u, w, x, y))
            for m in range(1, 13):
                for c in range(0, m):
                    result, report = kuw_deficit_tiling(u, w, m, c)
                    if report.total * u > (c + u - 1) * h and c > 0:
                        violations.append(("part2", u, w, m, c, report.total))
                    if len(result.used_X()) + report.l_X != m * u - c:
                        violations.append(("accounting2", u, w, m, c))
    assert violations == []


def test_almost_tiling_validates_sample():
    for u, w, x, y in [(1, 2, 17, 23), (2, 3, 30, 41), (3, 5, 44, 60), (4, 5, 59, 60)]:
        result, _ = kuw_almost_tiling(u, w, x, y)
        assert validate_tiling(HostGraph.complete(x, y), kuw_pattern(u, w), result).ok
