"""Built-in catalog of small bipartite patterns."""

from __future__ import annotations

from .graph import TileGraph, build_tile_graph, complete_bipartite_pattern, disjoint_union


def edge() -> TileGraph:
    return build_tile_graph(2, [(0, 1)], name="K2")


def isolated() -> TileGraph:
    return build_tile_graph(1, [], name="K1")


def star(k: int) -> TileGraph:
    return complete_bipartite_pattern(1, k, name=f"K1,{k}")


def path(vertices: int) -> TileGraph:
    return build_tile_graph(vertices, [(i, i + 1) for i in range(vertices - 1)], name=f"P{vertices}")


def cycle(length: int) -> TileGraph:
    if length % 2:
        raise ValueError("only even cycles are bipartite")
    return build_tile_graph(length, [(i, (i + 1) % length) for i in range(length)], name=f"C{length}")


def copies(pattern: TileGraph, count: int) -> TileGraph:
    return disjoint_union(*([pattern] * count), name=f"{count}x{pattern.name}")


def union(*patterns: TileGraph) -> TileGraph:
    return disjoint_union(*patterns, name="+".join(p.name for p in patterns))


def catalog() -> dict[str, TileGraph]:
    """Named patterns used by the test suites and the experiments."""
    k2 = edge()
    k12 = star(2)
    entries = [
        k2,
        copies(k2, 2),
        copies(k2, 3),
        k12,
        union(k12, k2),
        union(star(3), k12),
        complete_bipartite_pattern(2, 2),
        complete_bipartite_pattern(2, 3),
        complete_bipartite_pattern(3, 4),
        cycle(6),
        union(cycle(6), k2),
        union(k12, k12),
        path(4),
        star(3),
        union(k12, isolated()),
        union(star(3), isolated()),
        union(star(4), k2),
        union(complete_bipartite_pattern(2, 3), k2),
        union(k12, k2, k2),
        union(k12, k12, k2),
    ]
    return {p.name: p for p in entries}


def get(name: str) -> TileGraph:
    table = catalog()
    if name not in table:
        raise KeyError(f"unknown pattern {name!r}; known: {', '.join(sorted(table))}")
    return table[name]
