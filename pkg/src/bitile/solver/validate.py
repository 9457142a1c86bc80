"""Independent checker for tiling assignments."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass

from ..graph import HostGraph, TileGraph
from ..tiling import TilingAssignment, piece_map, piece_sides

OK = "OK"


@dataclass(frozen=True)
class ValidationReport:
    status: str
    detail: str = ""
    copies: int = 0
    covered: int = 0
    leftover: int = 0

    @property
    def ok(self) -> bool:
        return self.status == OK

    def to_json(self) -> dict:
        return {"status": self.status, "detail": self.detail, "copies": self.copies,
                "covered": self.covered, "leftover": self.leftover}


def validate_tiling(G: HostGraph, H: TileGraph, assignment: TilingAssignment) -> ValidationReport:
    """Return the first violation found, or an OK report.

    Checks, in order: piece shape, pairwise disjointness, embedding of every
    pattern edge, that each copy has exactly one piece per component, and
    that the leftover lists are exactly the uncovered vertices.
    """
    pieces = assignment.pieces
    for piece in pieces:
        if not 0 <= piece.component < H.k_c:
            return ValidationReport("MalformedPiece", f"copy {piece.copy}: no component {piece.component}")
        xs, ys = piece_sides(H, piece.component, piece.swapped)
        if len(xs) != len(piece.X_vertices) or len(ys) != len(piece.Y_vertices):
            return ValidationReport("MalformedPiece",
                                    f"copy {piece.copy} component {piece.component}: side sizes do not match")
        for v in piece.X_vertices:
            if not 0 <= v < G.nx:
                return ValidationReport("MalformedPiece", f"x{v} is not a host vertex")
        for v in piece.Y_vertices:
            if not 0 <= v < G.ny:
                return ValidationReport("MalformedPiece", f"y{v} is not a host vertex")

    seen_x: dict[int, int] = {}
    seen_y: dict[int, int] = {}
    for piece in pieces:
        for v in piece.X_vertices:
            if v in seen_x:
                return ValidationReport("DisjointnessViolation",
                                        f"x{v} used by copies {seen_x[v]} and {piece.copy}")
            seen_x[v] = piece.copy
        for v in piece.Y_vertices:
            if v in seen_y:
                return ValidationReport("DisjointnessViolation",
                                        f"y{v} used by copies {seen_y[v]} and {piece.copy}")
            seen_y[v] = piece.copy

    if not G.is_complete:
        for piece in pieces:
            where = piece_map(H, piece)
            for a, b in H.components[piece.component].edges:
                (sa, ia), (sb, ib) = where[a], where[b]
                x, y = (ia, ib) if sa == "X" else (ib, ia)
                if not G.has_edge(x, y):
                    return ValidationReport("EmbeddingViolation",
                                            f"copy {piece.copy}: pattern edge {a}-{b} maps to non-edge x{x}-y{y}")

    per_copy: dict[int, Counter] = defaultdict(Counter)
    for piece in pieces:
        per_copy[piece.copy][piece.component] += 1
    for copy, comps in per_copy.items():
        if any(comps[i] != 1 for i in range(H.k_c)):
            return ValidationReport("IncompleteCopy",
                                    f"copy {copy} has component counts {dict(comps)}, needs one of each of {H.k_c}")

    left_x = set(range(G.nx)) - set(seen_x)
    left_y = set(range(G.ny)) - set(seen_y)
    if set(assignment.leftover_X) != left_x or len(assignment.leftover_X) != len(left_x):
        return ValidationReport("LeftoverMismatch", "leftover_X differs from the uncovered X vertices")
    if set(assignment.leftover_Y) != left_y or len(assignment.leftover_Y) != len(left_y):
        return ValidationReport("LeftoverMismatch", "leftover_Y differs from the uncovered Y vertices")

    covered = len(seen_x) + len(seen_y)
    return ValidationReport(OK, "", len(per_copy), covered, len(left_x) + len(left_y))
