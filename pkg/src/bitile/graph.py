"""Bipartite graph representations for the tiling pattern and the host.

The pattern (``TileGraph``) is stored as an explicit edge list plus its
component decomposition; every component carries its unique 2-coloring
``(U_i, W_i)`` normalised so that ``|W_i| >= |U_i|``.

The host (``HostGraph``) is stored as two tuples of Python ``int`` bitmasks:
``adj_x[i]`` is the neighbourhood of ``x_i`` inside ``Y`` and ``adj_y[j]`` the
neighbourhood of ``y_j`` inside ``X``.  Both directions are kept because the
solvers query neighbourhoods from either side.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import EdgeWithinSide, EmptySubset, InvalidGraph, NotBipartite, Unbalanced


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class ComponentColoring:
    """One connected component of the pattern with its 2-coloring."""

    vertices: tuple[int, ...]
    U: tuple[int, ...]
    W: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def c(self) -> int:
        return len(self.U) + len(self.W)

    @property
    def d(self) -> int:
        return len(self.W) - len(self.U)

    def side_of(self, v: int) -> str:
        return "U" if v in self.U else "W"


@dataclass(frozen=True)
class TileGraph:
    """A bipartite pattern ``H`` on vertices ``0..h-1``."""

    h: int
    edges: tuple[tuple[int, int], ...]
    components: tuple[ComponentColoring, ...]
    name: str = field(default="", compare=False)

    @property
    def k_c(self) -> int:
        return len(self.components)

    @property
    def c(self) -> tuple[int, ...]:
        return tuple(comp.c for comp in self.components)

    @property
    def d(self) -> tuple[int, ...]:
        return tuple(comp.d for comp in self.components)

    @property
    def has_edges(self) -> bool:
        return bool(self.edges)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.h)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return tuple(frozenset(s) for s in adj)

    def to_json(self) -> dict:
        out = {"vertices": self.h, "edges": [list(e) for e in self.edges]}
        if self.name:
            out["name"] = self.name
        return out

    def to_dot(self) -> str:
        lines = ["graph H {"]
        for comp in self.components:
            for v in comp.U:
                lines.append(f'  {v} [shape=box, label="{v}"];')
            for v in comp.W:
                lines.append(f'  {v} [shape=ellipse, label="{v}"];')
        for a, b in self.edges:
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _odd_cycle(parent: list[int], a: int, b: int) -> list[int]:
    path_a = [a]
    while parent[path_a[-1]] != -1:
        path_a.append(parent[path_a[-1]])
    path_b = [b]
    while parent[path_b[-1]] != -1:
        path_b.append(parent[path_b[-1]])
    on_a = {v: i for i, v in enumerate(path_a)}
    for j, v in enumerate(path_b):
        if v in on_a:
            return path_a[: on_a[v] + 1] + path_b[:j][::-1]
    raise AssertionError("vertices in one BFS tree must share a root")


def _degree_key(comp: ComponentColoring, adj: list[set[int]]) -> tuple[int, ...]:
    return tuple(sorted((len(adj[v]) for v in comp.vertices), reverse=True))


def build_tile_graph(vertices: int, edges: Iterable[Sequence[int]], name: str = "") -> TileGraph:
    """Validate a pattern and decompose it into 2-colored components.

    Components are ordered by decreasing order ``c_i``, then decreasing
    imbalance ``d_i``, then by the descending degree sequence (lexicographic),
    then by smallest vertex, so coefficient vectors derived from the order are
    reproducible.
    """
    if vertices < 1:
        raise InvalidGraph("a pattern needs at least one vertex")
    adj: list[set[int]] = [set() for _ in range(vertices)]
    clean: set[tuple[int, int]] = set()
    for e in edges:
        a, b = int(e[0]), int(e[1])
        if not (0 <= a < vertices and 0 <= b < vertices):
            raise InvalidGraph(f"edge {e} references a missing vertex")
        if a == b:
            raise NotBipartite([a])
        a, b = min(a, b), max(a, b)
        clean.add((a, b))
        adj[a].add(b)
        adj[b].add(a)

    color = [-1] * vertices
    parent = [-1] * vertices
    comps: list[ComponentColoring] = []
    for root in range(vertices):
        if color[root] != -1:
            continue
        color[root] = 0
        queue = deque([root])
        members = [root]
        while queue:
            v = queue.popleft()
            for nb in sorted(adj[v]):
                if color[nb] == -1:
                    color[nb] = 1 - color[v]
                    parent[nb] = v
                    members.append(nb)
                    queue.append(nb)
                elif color[nb] == color[v]:
                    raise NotBipartite(_odd_cycle(parent, v, nb))
        side0 = tuple(sorted(v for v in members if color[v] == 0))
        side1 = tuple(sorted(v for v in members if color[v] == 1))
        # root is in side0, so on a tie U keeps the smallest vertex
        U, W = (side0, side1) if len(side0) <= len(side1) else (side1, side0)
        member_set = set(members)
        comp_edges = tuple(sorted(e for e in clean if e[0] in member_set))
        comps.append(ComponentColoring(tuple(sorted(members)), U, W, comp_edges))

    comps.sort(key=lambda cc: (-cc.c, -cc.d, tuple(-x for x in _degree_key(cc, adj)), cc.vertices[0]))
    return TileGraph(vertices, tuple(sorted(clean)), tuple(comps), name)


def disjoint_union(*patterns: TileGraph, name: str = "") -> TileGraph:
    edges = []
    offset = 0
    for p in patterns:
        edges.extend((a + offset, b + offset) for a, b in p.edges)
        offset += p.h
    return build_tile_graph(offset, edges, name=name)


def complete_bipartite_pattern(a: int, b: int, name: str = "") -> TileGraph:
    """``K_{a,b}`` as a pattern; vertices ``0..a-1`` form one side."""
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return build_tile_graph(a + b, edges, name=name or f"K{a},{b}")


class HostGraph:
    """Bipartite host ``G[X, Y]`` with bitmask adjacency in both directions.

    Instances are immutable; ``with_edges``/``without_edges`` return new hosts.
    ``nx != ny`` is allowed for internal sub-hosts (pairs, residual pieces);
    ``build_host`` enforces balance for user-facing hosts.
    """

    __slots__ = ("nx", "ny", "adj_x", "adj_y", "_min_degree")

    def __init__(self, nx: int, ny: int, adj_x: Sequence[int]):
        if len(adj_x) != nx:
            raise InvalidGraph("adjacency length does not match |X|")
        full_y = (1 << ny) - 1
        adj_y = [0] * ny
        for i, row in enumerate(adj_x):
            if row & ~full_y:
                raise InvalidGraph(f"x{i} has a neighbour outside Y")
            for j in bits(row):
                adj_y[j] |= 1 << i
        self.nx = nx
        self.ny = ny
        self.adj_x = tuple(adj_x)
        self.adj_y = tuple(adj_y)
        self._min_degree: int | None = None

    # construction helpers -------------------------------------------------
    @classmethod
    def from_edges(cls, nx: int, ny: int, edges: Iterable[Sequence[int]]) -> "HostGraph":
        rows = [0] * nx
        for e in edges:
            x, y = int(e[0]), int(e[1])
            if not (0 <= x < nx and 0 <= y < ny):
                raise InvalidGraph(f"edge {list(e)} outside X x Y")
            rows[x] |= 1 << y
        return cls(nx, ny, rows)

    @classmethod
    def complete(cls, nx: int, ny: int) -> "HostGraph":
        return cls(nx, ny, [(1 << ny) - 1] * nx)

    @classmethod
    def empty(cls, nx: int, ny: int) -> "HostGraph":
        return cls(nx, ny, [0] * nx)

    # basic queries ---------------------------------------------------------
    @property
    def n(self) -> int:
        if self.nx != self.ny:
            raise Unbalanced(f"|X|={self.nx} != |Y|={self.ny}")
        return self.nx

    @property
    def balanced(self) -> bool:
        return self.nx == self.ny

    def has_edge(self, x: int, y: int) -> bool:
        return bool(self.adj_x[x] >> y & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.nx) for y in bits(self.adj_x[x])]

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj_x)

    def degrees_x(self) -> list[int]:
        return [row.bit_count() for row in self.adj_x]

    def degrees_y(self) -> list[int]:
        return [col.bit_count() for col in self.adj_y]

    @property
    def min_degree(self) -> int:
        if self._min_degree is None:
            degs = self.degrees_x() + self.degrees_y()
            self._min_degree = min(degs) if degs else 0
        return self._min_degree

    @property
    def is_complete(self) -> bool:
        full = (1 << self.ny) - 1
        return all(row == full for row in self.adj_x)

    def e(self, A: Iterable[int], B: Iterable[int]) -> int:
        bmask = mask_of(B)
        return sum((self.adj_x[x] & bmask).bit_count() for x in set(A))

    def density(self, A: Iterable[int], B: Iterable[int]) -> Fraction:
        return density(self, A, B)

    # derived hosts ---------------------------------------------------------
    def with_edges(self, edges: Iterable[Sequence[int]]) -> "HostGraph":
        rows = list(self.adj_x)
        for x, y in edges:
            if not (0 <= x < self.nx and 0 <= y < self.ny):
                raise InvalidGraph(f"edge {(x, y)} outside X x Y")
            rows[x] |= 1 << y
        return HostGraph(self.nx, self.ny, rows)

    def without_edges(self, edges: Iterable[Sequence[int]]) -> "HostGraph":
        rows = list(self.adj_x)
        for x, y in edges:
            rows[x] &= ~(1 << y)
        return HostGraph(self.nx, self.ny, rows)

    def transpose(self) -> "HostGraph":
        return HostGraph(self.ny, self.nx, self.adj_y)

    def induced(self, xs: Sequence[int], ys: Sequence[int]) -> "HostGraph":
        """Sub-host on ``xs`` x ``ys``; new index ``k`` maps to ``xs[k]``/``ys[k]``."""
        ypos = {y: k for k, y in enumerate(ys)}
        rows = []
        for x in xs:
            row = 0
            for y in bits(self.adj_x[x]):
                k = ypos.get(y)
                if k is not None:
                    row |= 1 << k
            rows.append(row)
        return HostGraph(len(xs), len(ys), rows)

    # serialisation ---------------------------------------------------------
    def to_json(self) -> dict:
        out: dict = {"n": self.nx, "edges": [list(e) for e in self.edges()]}
        if self.nx != self.ny:
            out["ny"] = self.ny
        return out

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{", "  rankdir=LR;"]
        lines += [f'  x{i} [shape=box];' for i in range(self.nx)]
        lines += [f'  y{j} [shape=ellipse];' for j in range(self.ny)]
        lines += [f"  x{x} -- y{y};" for x, y in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HostGraph) and (self.nx, self.ny, self.adj_x) == (other.nx, other.ny, other.adj_x)

    def __hash__(self) -> int:
        return hash((self.nx, self.ny, self.adj_x))

    def __repr__(self) -> str:
        return f"HostGraph(nx={self.nx}, ny={self.ny}, edges={self.edge_count}, delta={self.min_degree})"


def build_host(n: int, edges: Iterable[Sequence[int]], ny: int | None = None) -> HostGraph:
    """Balanced host from ``[x, y]`` index pairs (0-based, one index per side)."""
    if n < 1:
        raise InvalidGraph("a host needs n >= 1")
    if ny is not None and ny != n:
        raise Unbalanced(f"|X|={n} != |Y|={ny}")
    return HostGraph.from_edges(n, n, edges)


def build_host_global(n: int, edges: Iterable[Sequence[int]]) -> HostGraph:
    """Balanced host from global vertex ids: ``X = 0..n-1``, ``Y = n..2n-1``."""
    pairs = []
    for e in edges:
        a, b = int(e[0]), int(e[1])
        for v in (a, b):
            if not 0 <= v < 2 * n:
                raise InvalidGraph(f"vertex {v} outside 0..{2 * n - 1}")
        if (a < n) == (b < n):
            raise EdgeWithinSide(f"edge {[a, b]} lies inside one side")
        x, y = (a, b - n) if a < n else (b, a - n)
        pairs.append((x, y))
    return build_host(n, pairs)


def density(G: HostGraph, A: Iterable[int], B: Iterable[int]) -> Fraction:
    """Exact ``e(A, B) / (|A| |B|)`` for ``A`` in X and ``B`` in Y."""
    A = set(A)
    B = set(B)
    if not A or not B:
        raise EmptySubset("density needs nonempty A and B")
    return Fraction(G.e(A, B), len(A) * len(B))


def tile_graph_from_json(data: dict) -> TileGraph:
    if "vertices" not in data or "edges" not in data:
        raise InvalidGraph('pattern JSON needs "vertices" and "edges"')
    return build_tile_graph(int(data["vertices"]), data["edges"], name=data.get("name", ""))


def host_from_json(data: dict, allow_unbalanced: bool = False) -> HostGraph:
    if "n" not in data or "edges" not in data:
        raise InvalidGraph('host JSON needs "n" and "edges"')
    ny = data.get("ny")
    if ny is not None and int(ny) != int(data["n"]):
        if not allow_unbalanced:
            raise Unbalanced(f"|X|={data['n']} != |Y|={ny}")
        return HostGraph.from_edges(int(data["n"]), int(ny), data["edges"])
    return build_host(int(data["n"]), data["edges"])
