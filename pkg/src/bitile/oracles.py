"""Slow, independent reference implementations used to cross-check the fast code.

Nothing here shares logic with the production paths: colorings are
enumerated vertex by vertex, embeddings come from ``itertools``
permutations, and the packer is a memoised skip-or-cover recursion with no
bounds.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache, reduce

import networkx as nx_

from .graph import HostGraph, TileGraph


def _nx_pattern(H: TileGraph) -> nx_.Graph:
    g = nx_.Graph()
    g.add_nodes_from(range(H.h))
    g.add_edges_from(H.edges)
    return g


def proper_colorings(H: TileGraph):
    """Yield every proper 2-coloring of ``H`` as a tuple of 0/1 per vertex."""
    for colors in itertools.product((0, 1), repeat=H.h):
        if all(colors[a] != colors[b] for a, b in H.edges):
            yield colors


def brute_invariants(H: TileGraph) -> dict:
    """sigma, D(H), and the hcf family from exhaustive coloring enumeration."""
    sizes = []
    for colors in proper_colorings(H):
        ones = sum(colors)
        sizes.append((H.h - ones, ones))
    sigma = min(min(a, b) for a, b in sizes)
    D = {abs(a - b) for a, b in sizes}
    g = _nx_pattern(H)
    orders, imbalances = [], []
    for comp in nx_.connected_components(g):
        sub = g.subgraph(comp)
        if len(comp) == 1:
            left, right = set(comp), set()
        else:
            left, right = nx_.bipartite.sets(sub)
        orders.append(len(comp))
        imbalances.append(abs(len(left) - len(right)))
    nonzero_D = [x for x in D if x]
    nonzero_d = [x for x in imbalances if x]
    hcf_c = reduce(math.gcd, orders)
    hcf_chi = reduce(math.gcd, nonzero_D) if nonzero_D else math.inf
    hcf_chi_c = reduce(math.gcd, nonzero_d) if nonzero_d else math.inf
    return {
        "sigma": sigma, "w": H.h - sigma, "D": D, "hcf_c": hcf_c, "hcf_chi": hcf_chi,
        "hcf_chi_c": hcf_chi_c, "indicator": hcf_c == 1 and hcf_chi <= 2,
        "orders": sorted(orders), "imbalances": sorted(imbalances),
    }


def sigma_by_orientation(d: list[int], h: int) -> int:
    """sigma from all ``2^k`` orientations of the components."""
    best = h
    for signs in itertools.product((-1, 1), repeat=len(d)):
        spread = abs(sum(s * x for s, x in zip(signs, d)))
        best = min(best, (h - spread) // 2)
    return best


def brute_embeddings(G: HostGraph, H: TileGraph, comp_index: int) -> set[tuple[frozenset, frozenset]]:
    """Image sets of every embedding of one component, by trying all injections."""
    comp = H.components[comp_index]
    out = set()
    for xs_side, ys_side in ((comp.U, comp.W), (comp.W, comp.U)):
        for xs in itertools.permutations(range(G.nx), len(xs_side)):
            image = dict(zip(xs_side, (("X", x) for x in xs)))
            for ys in itertools.permutations(range(G.ny), len(ys_side)):
                image.update(zip(ys_side, (("Y", y) for y in ys)))
                ok = True
                for a, b in comp.edges:
                    (sa, ia), (sb, ib) = image[a], image[b]
                    x, y = (ia, ib) if sa == "X" else (ib, ia)
                    if not G.has_edge(x, y):
                        ok = False
                        break
                if ok:
                    out.add((frozenset(i for s, i in image.values() if s == "X"),
                             frozenset(i for s, i in image.values() if s == "Y")))
    return out


def naive_max_tiling(G: HostGraph, H: TileGraph) -> int:
    """Maximum number of disjoint copies of ``H`` by exhaustive skip-or-cover recursion."""
    total = G.nx + G.ny
    cap = total // H.h
    emb = []
    for i in range(H.k_c):
        masks = []
        for xs, ys in brute_embeddings(G, H, i):
            m = 0
            for x in xs:
                m |= 1 << x
            for y in ys:
                m |= 1 << (G.nx + y)
            masks.append(m)
        emb.append(masks)
    containing = [[[m for m in emb[i] if m >> v & 1] for i in range(H.k_c)] for v in range(total)]
    full = (1 << total) - 1

    @lru_cache(maxsize=None)
    def best(decided: int, counts: tuple[int, ...]) -> int:
        if decided == full:
            return min(counts)
        free = ~decided & full
        v = (free & -free).bit_length() - 1
        result = best(decided | 1 << v, counts)
        for i in range(H.k_c):
            if counts[i] >= cap:
                continue
            bumped = counts[:i] + (counts[i] + 1,) + counts[i + 1:]
            for m in containing[v][i]:
                if m & decided == 0:
                    result = max(result, best(decided | m, bumped))
        return result

    value = best(0, (0,) * H.k_c)
    best.cache_clear()
    return value


def brute_regular(G: HostGraph, xs: list[int], ys: list[int], eps) -> bool:
    """epsilon-regularity by enumerating every pair of qualifying subsets."""
    from fractions import Fraction

    eps = Fraction(eps)
    pair_density = Fraction(G.e(xs, ys), len(xs) * len(ys))
    subsets_x = [a for r in range(1, len(xs) + 1) if r > eps * len(xs)
                 for a in itertools.combinations(xs, r)]
    subsets_y = [b for r in range(1, len(ys) + 1) if r > eps * len(ys)
                 for b in itertools.combinations(ys, r)]
    for a in subsets_x:
        for b in subsets_y:
            if abs(Fraction(G.e(a, b), len(a) * len(b)) - pair_density) >= eps:
                return False
    return True
