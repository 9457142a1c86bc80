"""Maximum bipartite matching by augmenting paths."""

from __future__ import annotations

from ..graph import HostGraph, bits


def max_matching(G: HostGraph) -> tuple[int, list[tuple[int, int]]]:
    """Return ``(size, pairs)`` with ``pairs`` a list of ``(x, y)`` matched edges."""
    match_y = [-1] * G.ny

    def augment(x: int, visited: list[int]) -> bool:
        free = G.adj_x[x] & ~visited[0]
        for y in bits(free):
            visited[0] |= 1 << y
            if match_y[y] < 0 or augment(match_y[y], visited):
                match_y[y] = x
                return True
        return False

    size = 0
    for x in range(G.nx):
        if augment(x, [0]):
            size += 1
    pairs = sorted((x, y) for y, x in enumerate(match_y) if x >= 0)
    return size, pairs
