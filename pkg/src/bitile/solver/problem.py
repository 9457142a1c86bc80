"""Compress a tiling instance into twin classes and placement vectors.

Host vertices on the same side with identical neighbourhoods are
interchangeable, so the search only tracks how many vertices of each such
twin class remain.  A *placement* says how many vertices of each class one
embedded component uses; any vertices of the right classes realise it.

Components of the pattern are grouped into isomorphism types.  A copy of
the pattern is any disjoint choice of ``mult[type]`` embedded components of
every type, because the components of the pattern share no edges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import networkx as nx_
from networkx.algorithms.isomorphism import GraphMatcher

from ..graph import HostGraph, TileGraph, bits
from ..tiling import Piece, TilingAssignment, make_piece


@dataclass(frozen=True)
class TwinClasses:
    side: tuple[str, ...]              # "X" or "Y" per class
    members: tuple[tuple[int, ...], ...]
    adjacent: tuple[tuple[bool, ...], ...]  # adjacent[a][b] for any two classes

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.members)

    def __len__(self) -> int:
        return len(self.members)


def twin_classes(G: HostGraph) -> TwinClasses:
    side: list[str] = []
    members: list[tuple[int, ...]] = []
    groups: dict[int, list[int]] = {}
    for x, row in enumerate(G.adj_x):
        groups.setdefault(row, []).append(x)
    for row, xs in groups.items():
        side.append("X")
        members.append(tuple(xs))
    groups = {}
    for y, col in enumerate(G.adj_y):
        groups.setdefault(col, []).append(y)
    for col, ys in groups.items():
        side.append("Y")
        members.append(tuple(ys))
    k = len(members)
    adjacent = [[False] * k for _ in range(k)]
    for a in range(k):
        if side[a] != "X":
            continue
        row = G.adj_x[members[a][0]]
        for b in range(k):
            if side[b] == "Y" and row >> members[b][0] & 1:
                adjacent[a][b] = adjacent[b][a] = True
    return TwinClasses(tuple(side), tuple(members), tuple(tuple(r) for r in adjacent))


def _component_graph(H: TileGraph, i: int) -> nx_.Graph:
    comp = H.components[i]
    g = nx_.Graph()
    g.add_nodes_from(comp.vertices)
    g.add_edges_from(comp.edges)
    return g


@dataclass(frozen=True)
class ComponentType:
    representative: int                 # component index used for placements
    members: tuple[int, ...]            # component indices of this type
    to_rep: tuple[dict, ...]            # per member: its vertex -> representative vertex

    @property
    def mult(self) -> int:
        return len(self.members)


def component_types(H: TileGraph) -> list[ComponentType]:
    graphs = [_component_graph(H, i) for i in range(H.k_c)]
    types: list[list] = []  # [rep, members, maps]
    for i, g in enumerate(graphs):
        for entry in types:
            rep = entry[0]
            if H.components[rep].c != H.components[i].c or H.components[rep].d != H.components[i].d:
                continue
            matcher = GraphMatcher(g, graphs[rep])
            if matcher.is_isomorphic():
                entry[1].append(i)
                entry[2].append(dict(matcher.mapping))
                break
        else:
            types.append([i, [i], [{v: v for v in H.components[i].vertices}]])
    return [ComponentType(rep, tuple(ms), tuple(maps)) for rep, ms, maps in types]


@dataclass(frozen=True)
class Placement:
    type_index: int
    counts: tuple[tuple[int, int], ...]   # sparse (class, count), class ascending
    witness: dict                          # representative vertex -> class

    @property
    def size(self) -> int:
        return sum(k for _, k in self.counts)


def _bfs_order(H: TileGraph, comp_index: int) -> list[int]:
    comp = H.components[comp_index]
    adj = H.adjacency
    root = comp.vertices[0]
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for nb in sorted(adj[v]):
            if nb not in seen:
                seen.add(nb)
                order.append(nb)
                queue.append(nb)
    return order


def enumerate_placements(H: TileGraph, comp_index: int, classes: TwinClasses,
                         type_index: int = 0) -> list[Placement]:
    """All distinct class-count vectors of embeddings of one component, both orientations."""
    adj = H.adjacency
    order = _bfs_order(H, comp_index)
    pos = {v: k for k, v in enumerate(order)}
    earlier_nbrs = [[nb for nb in adj[v] if pos[nb] < pos[v]] for v in order]
    # twin vertices inside the component are interchangeable: keep their classes sorted
    twin_prev: list[int | None] = []
    for k, v in enumerate(order):
        prev = None
        for j in range(k - 1, -1, -1):
            if adj[order[j]] == adj[v]:
                prev = j
                break
        twin_prev.append(prev)

    sizes = classes.sizes
    by_side = {"X": [c for c in range(len(classes)) if classes.side[c] == "X"],
               "Y": [c for c in range(len(classes)) if classes.side[c] == "Y"]}
    U = set(H.components[comp_index].U)
    found: dict[tuple, Placement] = {}
    used = [0] * len(classes)
    chosen = [0] * len(order)

    def extend(k: int, u_side: str, w_side: str) -> None:
        if k == len(order):
            key = tuple((c, used[c]) for c in range(len(used)) if used[c])
            if key not in found:
                witness = {order[j]: chosen[j] for j in range(len(order))}
                found[key] = Placement(type_index, key, witness)
            return
        v = order[k]
        side = u_side if v in U else w_side
        floor = chosen[twin_prev[k]] if twin_prev[k] is not None else -1
        for c in by_side[side]:
            if c < floor or used[c] >= sizes[c]:
                continue
            if any(not classes.adjacent[c][chosen[pos[nb]]] for nb in earlier_nbrs[k]):
                continue
            used[c] += 1
            chosen[k] = c
            extend(k + 1, u_side, w_side)
            used[c] -= 1

    extend(0, "X", "Y")
    extend(0, "Y", "X")
    return sorted(found.values(), key=lambda p: p.counts)


@dataclass
class Problem:
    """Flat description of an instance, shared by both search backends."""

    classes: TwinClasses
    types: list[ComponentType]
    placements: list[Placement]
    type_size: list[int]
    mult: list[int]
    max_copies: int

    @property
    def class_sizes(self) -> list[int]:
        return list(self.classes.sizes)


def build_problem(G: HostGraph, H: TileGraph) -> Problem:
    classes = twin_classes(G)
    types = component_types(H)
    placements: list[Placement] = []
    for t_index, ctype in enumerate(types):
        placements.extend(enumerate_placements(H, ctype.representative, classes, t_index))
    type_size = [H.components[t.representative].c for t in types]
    return Problem(classes, types, placements, type_size, [t.mult for t in types],
                   (G.nx + G.ny) // H.h)


def realise(G: HostGraph, H: TileGraph, problem: Problem, decisions: list[int],
            copies: int) -> TilingAssignment:
    """Turn a decision sequence into concrete pieces.

    A decision ``p >= 0`` places placement ``p``; ``-(c+1)`` discards one
    vertex of class ``c``.  Vertices of each class are consumed lowest first.
    """
    classes = problem.classes
    cursor = [0] * len(classes)
    embedded: list[list[dict]] = [[] for _ in problem.types]  # per type: rep vertex -> (side, host)

    def take(c: int) -> int:
        v = classes.members[c][cursor[c]]
        cursor[c] += 1
        return v

    for dec in decisions:
        if dec < 0:
            take(-dec - 1)
            continue
        pl = problem.placements[dec]
        image = {}
        for v in sorted(pl.witness):
            c = pl.witness[v]
            image[v] = (classes.side[c], take(c))
        embedded[pl.type_index].append(image)

    pieces: list[Piece] = []
    for copy in range(copies):
        for t_index, ctype in enumerate(problem.types):
            for slot, comp in enumerate(ctype.members):
                image = embedded[t_index][copy * ctype.mult + slot]
                rep_map = ctype.to_rep[slot]
                host = {v: image[rep_map[v]] for v in H.components[comp].vertices}
                first_w = H.components[comp].W[0]
                swapped = host[first_w][0] == "X"
                pieces.append(make_piece(H, copy, comp, swapped, {v: s[1] for v, s in host.items()}))

    used_x = {x for p in pieces for x in p.X_vertices}
    used_y = {y for p in pieces for y in p.Y_vertices}
    leftover_x = tuple(x for x in range(G.nx) if x not in used_x)
    leftover_y = tuple(y for y in range(G.ny) if y not in used_y)
    return TilingAssignment(H, tuple(pieces), leftover_x, leftover_y)


def embedding_catalog(G: HostGraph, H: TileGraph, comp_index: int) -> set[tuple[frozenset, frozenset]]:
    """Image vertex sets ``(X part, Y part)`` of all embeddings of one component.

    Explicit (non-compressed) enumeration; used to cross-check placements.
    """
    adj = H.adjacency
    order = _bfs_order(H, comp_index)
    pos = {v: k for k, v in enumerate(order)}
    earlier = [[nb for nb in adj[v] if pos[nb] < pos[v]] for v in order]
    U = set(H.components[comp_index].U)
    out: set[tuple[frozenset, frozenset]] = set()
    image: list[tuple[str, int]] = [("X", 0)] * len(order)

    def extend(k: int, u_side: str, used_x: int, used_y: int) -> None:
        if k == len(order):
            xs = frozenset(i for s, i in image if s == "X")
            ys = frozenset(i for s, i in image if s == "Y")
            out.add((xs, ys))
            return
        v = order[k]
        side = u_side if v in U else ("Y" if u_side == "X" else "X")
        if side == "X":
            cand = (1 << G.nx) - 1 & ~used_x
            for nb in earlier[k]:
                cand &= G.adj_y[image[pos[nb]][1]]
            for x in bits(cand):
                image[k] = ("X", x)
                extend(k + 1, u_side, used_x | 1 << x, used_y)
        else:
            cand = (1 << G.ny) - 1 & ~used_y
            for nb in earlier[k]:
                cand &= G.adj_x[image[pos[nb]][1]]
            for y in bits(cand):
                image[k] = ("Y", y)
                extend(k + 1, u_side, used_x, used_y | 1 << y)

    extend(0, "X", 0, 0)
    extend(0, "Y", 0, 0)
    return out
