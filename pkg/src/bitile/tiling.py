"""Value objects describing an H-tiling of a bipartite host.

A tiling is a list of :class:`Piece` objects.  A piece is one component of
one copy of the pattern, embedded with a fixed orientation: when
``swapped`` is false the component's ``U`` class sits in ``X``; when true
it is ``W`` that sits in ``X``.  ``X_vertices[k]`` is the host image of the
``k``-th pattern vertex (ascending id) of whichever class sits in ``X``;
likewise for ``Y_vertices``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graph import TileGraph, build_tile_graph


@dataclass(frozen=True)
class Piece:
    copy: int
    component: int
    swapped: bool
    X_vertices: tuple[int, ...]
    Y_vertices: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "copy": self.copy,
            "component": self.component,
            "swapped": self.swapped,
            "X_vertices": list(self.X_vertices),
            "Y_vertices": list(self.Y_vertices),
        }


def piece_sides(H: TileGraph, component: int, swapped: bool) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Pattern vertices of ``component`` that land in X and in Y."""
    comp = H.components[component]
    return (comp.W, comp.U) if swapped else (comp.U, comp.W)


def piece_map(H: TileGraph, piece: Piece) -> dict[int, tuple[str, int]]:
    """Pattern vertex -> (side, host index) for one piece."""
    xs, ys = piece_sides(H, piece.component, piece.swapped)
    out = {v: ("X", x) for v, x in zip(xs, piece.X_vertices)}
    out.update({v: ("Y", y) for v, y in zip(ys, piece.Y_vertices)})
    return out


def make_piece(H: TileGraph, copy: int, component: int, swapped: bool,
               image: dict[int, int]) -> Piece:
    """Build a piece from a pattern-vertex -> host-index map (side implied by orientation)."""
    xs, ys = piece_sides(H, component, swapped)
    return Piece(copy, component, swapped, tuple(image[v] for v in xs), tuple(image[v] for v in ys))


@dataclass(frozen=True)
class LeftoverReport:
    """Bookkeeping of an almost-tiling of a complete host by ``K_{u,w}``."""

    l_X: int
    l_Y: int
    m: int
    r: int
    p: int
    q: int
    branch: str
    copies_w_in_Y: int

    @property
    def total(self) -> int:
        return self.l_X + self.l_Y

    def to_json(self) -> dict:
        return {
            "l_X": self.l_X, "l_Y": self.l_Y, "total": self.total, "m": self.m,
            "r": self.r, "p": self.p, "q": self.q, "branch": self.branch,
            "copies_w_in_Y": self.copies_w_in_Y,
        }


@dataclass(frozen=True)
class TilingAssignment:
    pattern: TileGraph
    pieces: tuple[Piece, ...]
    leftover_X: tuple[int, ...] = ()
    leftover_Y: tuple[int, ...] = ()
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def copy_ids(self) -> list[int]:
        return sorted({p.copy for p in self.pieces})

    @property
    def num_copies(self) -> int:
        return len({p.copy for p in self.pieces})

    @property
    def perfect(self) -> bool:
        return not self.leftover_X and not self.leftover_Y

    def used_X(self) -> list[int]:
        return [x for p in self.pieces for x in p.X_vertices]

    def used_Y(self) -> list[int]:
        return [y for p in self.pieces for y in p.Y_vertices]

    def transposed(self) -> "TilingAssignment":
        """The same tiling viewed in the host with X and Y exchanged."""
        pieces = tuple(Piece(p.copy, p.component, not p.swapped, p.Y_vertices, p.X_vertices)
                       for p in self.pieces)
        return TilingAssignment(self.pattern, pieces, self.leftover_Y, self.leftover_X, dict(self.meta))

    def relabel(self, xs: list[int] | tuple[int, ...], ys: list[int] | tuple[int, ...],
                copy_offset: int = 0) -> "TilingAssignment":
        """Map local indices through ``xs``/``ys`` (as produced by ``HostGraph.induced``)."""
        pieces = tuple(
            Piece(p.copy + copy_offset, p.component, p.swapped,
                  tuple(xs[i] for i in p.X_vertices), tuple(ys[j] for j in p.Y_vertices))
            for p in self.pieces
        )
        return TilingAssignment(self.pattern, pieces,
                                tuple(xs[i] for i in self.leftover_X),
                                tuple(ys[j] for j in self.leftover_Y), dict(self.meta))

    def to_json(self) -> dict:
        out = {
            "copies": [p.to_json() for p in sorted(self.pieces, key=lambda p: (p.copy, p.component))],
            "leftover_X": sorted(self.leftover_X),
            "leftover_Y": sorted(self.leftover_Y),
        }
        if self.meta:
            out["meta"] = self.meta
        return out


def combine(pattern: TileGraph, parts: Iterable[TilingAssignment],
            leftover_X: Iterable[int] = (), leftover_Y: Iterable[int] = (),
            meta: dict | None = None) -> TilingAssignment:
    """Concatenate tilings over disjoint vertex sets, renumbering copies."""
    pieces: list[Piece] = []
    next_copy = 0
    for part in parts:
        renumber = {c: next_copy + k for k, c in enumerate(part.copy_ids)}
        next_copy += len(renumber)
        pieces.extend(Piece(renumber[p.copy], p.component, p.swapped, p.X_vertices, p.Y_vertices)
                      for p in part.pieces)
    return TilingAssignment(pattern, tuple(pieces), tuple(leftover_X), tuple(leftover_Y), meta or {})


def assignment_from_json(data: dict, pattern: TileGraph) -> TilingAssignment:
    pieces = tuple(
        Piece(int(c.get("copy", k)), int(c["component"]), bool(c["swapped"]),
              tuple(int(v) for v in c["X_vertices"]), tuple(int(v) for v in c["Y_vertices"]))
        for k, c in enumerate(data["copies"])
    )
    return TilingAssignment(pattern, pieces,
                            tuple(int(v) for v in data.get("leftover_X", [])),
                            tuple(int(v) for v in data.get("leftover_Y", [])))


def kuw_pattern(u: int, w: int) -> TileGraph:
    """``K_{u,w}`` with the ``u`` class as component 0's ``U``."""
    edges = [(i, u + j) for i in range(u) for j in range(w)]
    return build_tile_graph(u + w, edges, name=f"K{u},{w}")
