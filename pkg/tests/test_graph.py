import itertools
from fractions import Fraction

import pytest

from bitile import patterns
from bitile.errors import EdgeWithinSide, EmptySubset, InvalidGraph, NotBipartite, Unbalanced
from bitile.graph import (HostGraph, build_host, build_host_global, build_tile_graph, density,
                          host_from_json, tile_graph_from_json)


def test_single_edge():
    H = build_tile_graph(2, [(0, 1)])
    assert H.k_c == 1
    assert (H.c, H.d) == ((2,), (0,))


def test_star_plus_edge_components():
    H = patterns.union(patterns.star(2), patterns.edge())
    assert list(zip(H.c, H.d)) == [(3, 1), (2, 0)]


def test_triangle_rejected_with_cycle():
    with pytest.raises(NotBipartite) as info:
        build_tile_graph(3, [(0, 1), (1, 2), (2, 0)])
    assert sorted(info.value.cycle) == [0, 1, 2]


def test_bad_vertex_index():
    with pytest.raises(InvalidGraph):
        build_tile_graph(2, [(0, 5)])


def test_isolated_vertex_component():
    H = patterns.isolated()
    assert (H.c, H.d) == ((1,), (1,))


def test_canonical_component_order():
    H = build_tile_graph(5, [(3, 4), (0, 1), (0, 2)])
    assert H.c == (3, 2)


def test_colorings_normalised_and_exhaustive(catalog):
    for H in catalog.values():
        assert sum(H.c) == H.h
        assert sum(H.d) % 2 == H.h % 2
        for comp in H.components:
            assert len(comp.W) >= len(comp.U)
            for a, b in comp.edges:
                assert (a in comp.U) != (b in comp.U)
            verts = list(comp.vertices)
            found = set()
            for colors in itertools.product((0, 1), repeat=len(verts)):
                col = dict(zip(verts, colors))
                if all(col[a] != col[b] for a, b in comp.edges):
                    found.add(frozenset(v for v in verts if col[v] == 0))
            assert found == {frozenset(comp.U), frozenset(comp.W)}


def test_complete_host():
    G = HostGraph.complete(3, 3)
    assert G.min_degree == 3
    assert density(G, range(3), range(3)) == 1


def test_minus_perfect_matching():
    G = build_host(3, [(x, y) for x in range(3) for y in range(3) if x != y])
    assert G.min_degree == 2
    assert density(G, range(3), range(3)) == Fraction(6, 9)


def test_two_block_host():
    edges = [(x, y) for x in range(3) for y in range(7)]
    edges += [(x, y) for x in range(3, 10) for y in range(7, 10)]
    assert build_host(10, edges).min_degree == 3


def test_empty_host_density():
    assert density(HostGraph.empty(3, 3), range(3), range(3)) == 0


def test_density_empty_subset():
    with pytest.raises(EmptySubset):
        density(HostGraph.complete(2, 2), [], [0])


def test_unbalanced_and_within_side():
    with pytest.raises(Unbalanced):
        build_host(3, [], ny=4)
    with pytest.raises(EdgeWithinSide):
        build_host_global(2, [(0, 1)])


def test_degree_cache_after_edits():
    G = HostGraph.complete(4, 4)
    H = G.without_edges([(0, 0), (0, 1)])
    assert H.min_degree == 2 == min(H.degrees_x() + H.degrees_y())
    K = H.with_edges([(0, 0)])
    assert K.min_degree == 3 == min(K.degrees_x() + K.degrees_y())
    assert G.min_degree == 4


def test_json_round_trip(catalog):
    G = build_host(4, [(0, 1), (2, 3), (3, 0)])
    assert host_from_json(G.to_json()) == G
    for H in catalog.values():
        again = tile_graph_from_json(H.to_json())
        assert again.edges == H.edges and again.c == H.c


def test_dot_export():
    dot = HostGraph.complete(2, 2).to_dot()
    assert dot.startswith("graph G {") and dot.count("--") == 4
    assert "--" in patterns.edge().to_dot()
