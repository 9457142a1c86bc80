"""Embedding small bipartite pieces into dense host pairs, and disjoint stars.

All routines work on a :class:`HostGraph` plus explicit vertex pools; a pool
is a set of host indices on one side that may still be used.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import (BudgetExceeded, DivisibilityViolation, EmbedFailed, HypothesesUnmet,
                     PreconditionViolated, SearchFailed)
from .graph import HostGraph, TileGraph, bits, mask_of
from .tiling import Piece, TilingAssignment, make_piece, piece_sides

PIECE_STEP_LIMIT = 20_000
SOLVER_TAIL_VERTICES = 36


# ---------------------------------------------------------------------------
# single pieces


def _piece_order(H: TileGraph, comp: int) -> list[int]:
    """BFS from the highest-degree vertex, neighbours by decreasing degree."""
    adj = H.adjacency
    verts = H.components[comp].vertices
    root = max(verts, key=lambda v: (len(adj[v]), -v))
    order, seen, queue = [root], {root}, deque([root])
    while queue:
        v = queue.popleft()
        for nb in sorted(adj[v], key=lambda x: (-len(adj[x]), x)):
            if nb not in seen:
                seen.add(nb)
                order.append(nb)
                queue.append(nb)
    return order


def embed_piece(G: HostGraph, H: TileGraph, comp: int, swapped: bool, xmask: int, ymask: int,
                step_limit: int = PIECE_STEP_LIMIT) -> dict[int, int] | None:
    """Embed one component inside the pools ``xmask``/``ymask``.

    The first vertex goes to the host vertex with the fewest neighbours left
    in the opposite pool, so hard vertices are used while there is room.
    Vertices that still have unplaced neighbours prefer hosts with many
    neighbours in the opposite pool.  Plain backtracking on failure.
    """
    xs_side, _ = piece_sides(H, comp, swapped)
    in_x = set(xs_side)
    adj = H.adjacency
    order = _piece_order(H, comp)
    pos = {v: k for k, v in enumerate(order)}
    earlier = [[nb for nb in adj[v] if pos[nb] < k] for k, v in enumerate(order)]
    pending = [any(pos[nb] > k for nb in adj[v]) for k, v in enumerate(order)]
    image: dict[int, int] = {}
    used = {True: 0, False: 0}
    steps = 0

    def candidates(k: int) -> list[int]:
        v = order[k]
        on_x = v in in_x
        mask = (xmask if on_x else ymask) & ~used[on_x]
        for nb in earlier[k]:
            mask &= G.adj_y[image[nb]] if on_x else G.adj_x[image[nb]]
        rows, opposite = (G.adj_x, ymask) if on_x else (G.adj_y, xmask)
        cands = bits(mask)
        sign = -1 if pending[k] else 1
        cands.sort(key=lambda c: (sign * (rows[c] & opposite).bit_count(), c))
        return cands

    def extend(k: int) -> bool:
        nonlocal steps
        if k == len(order):
            return True
        v = order[k]
        on_x = v in in_x
        for c in candidates(k):
            steps += 1
            if steps > step_limit:
                return False
            image[v] = c
            used[on_x] |= 1 << c
            if extend(k + 1):
                return True
            used[on_x] &= ~(1 << c)
            del image[v]
        return False

    return dict(image) if extend(0) else None


def embed_requests(G: HostGraph, H: TileGraph, requests: Iterable[tuple[int, int, bool]],
                   xpool: set[int], ypool: set[int]) -> list[Piece]:
    """Embed ``(copy, component, swapped)`` requests one after another.

    Used vertices are removed from ``xpool``/``ypool`` in place.
    """
    pieces = []
    xmask, ymask = mask_of(xpool), mask_of(ypool)
    for copy, comp, swapped in requests:
        image = embed_piece(G, H, comp, swapped, xmask, ymask)
        if image is None:
            raise EmbedFailed(f"no room for component {comp} (swapped={swapped}) of copy {copy} "
                              f"in pools of sizes {xmask.bit_count()} and {ymask.bit_count()}")
        piece = make_piece(H, copy, comp, swapped, image)
        for x in piece.X_vertices:
            xmask &= ~(1 << x)
            xpool.discard(x)
        for y in piece.Y_vertices:
            ymask &= ~(1 << y)
            ypool.discard(y)
        pieces.append(piece)
    return pieces


# ---------------------------------------------------------------------------
# spanning embeddings of complete-host shapes


@dataclass(frozen=True)
class DegreeSlack:
    min_x_fraction: Fraction   # delta(X-part, Y-part) / |Y-part|
    min_y_fraction: Fraction
    rho: Fraction | None

    @property
    def meets(self) -> bool:
        if self.rho is None:
            return True
        return min(self.min_x_fraction, self.min_y_fraction) >= 1 - self.rho

    def to_json(self) -> dict:
        return {"min_x_fraction": str(self.min_x_fraction), "min_y_fraction": str(self.min_y_fraction),
                "rho": None if self.rho is None else str(self.rho), "meets": self.meets}


def degree_slack(G: HostGraph, xs: Sequence[int], ys: Sequence[int], rho=None) -> DegreeSlack:
    xmask, ymask = mask_of(xs), mask_of(ys)
    fx = min((Fraction((G.adj_x[x] & ymask).bit_count(), len(ys)) for x in xs), default=Fraction(1)) \
        if ys else Fraction(1)
    fy = min((Fraction((G.adj_y[y] & xmask).bit_count(), len(xs)) for y in ys), default=Fraction(1)) \
        if xs else Fraction(1)
    return DegreeSlack(fx, fy, None if rho is None else Fraction(rho))


@dataclass
class _Outcome:
    pieces: list[Piece]
    greedy_copies: int
    solver_copies: int
    restarts: int = 0
    notes: list[str] = field(default_factory=list)


def _solve_tail(G: HostGraph, H: TileGraph, xs: list[int], ys: list[int], first_copy: int,
                time_limit: float) -> list[Piece] | None:
    from .solver import SolveBudget, solve_factor

    sub = G.induced(xs, ys)
    try:
        result = solve_factor(sub, H, SolveBudget(time_limit=time_limit))
    except (BudgetExceeded, DivisibilityViolation):
        return None
    if not result.decision:
        return None
    return list(result.assignment.relabel(xs, ys, copy_offset=first_copy).pieces)


def _spanning(G: HostGraph, shape: TilingAssignment, xs: Sequence[int], ys: Sequence[int],
              tail_vertices: int, time_limit: float) -> _Outcome:
    H = shape.pattern
    by_copy: dict[int, list[Piece]] = {}
    for p in shape.pieces:
        by_copy.setdefault(p.copy, []).append(p)
    copies = [sorted(by_copy[c], key=lambda p: -(len(p.X_vertices) + len(p.Y_vertices)))
              for c in sorted(by_copy)]
    tail = max(1, min(len(copies), tail_vertices // H.h))
    notes = []
    for attempt in range(3):
        xpool, ypool = set(xs), set(ys)
        placed: list[Piece] = []
        greedy_upto = len(copies) - tail
        done = 0
        try:
            for k in range(greedy_upto):
                placed.extend(embed_requests(G, H, [(k, p.component, p.swapped) for p in copies[k]],
                                             xpool, ypool))
                done = k + 1
        except EmbedFailed as exc:
            notes.append(f"greedy stopped at copy {done}: {exc.detail}")
        remaining = len(copies) - done
        if remaining == 0:
            return _Outcome(placed, done, 0, attempt, notes)
        if remaining <= tail:
            tail_pieces = _solve_tail(G, H, sorted(xpool), sorted(ypool), done, time_limit)
            if tail_pieces is not None:
                return _Outcome(placed + tail_pieces, done, remaining, attempt, notes)
            notes.append(f"exact search found no factor on the last {remaining} copies")
        # release more copies to the exact search and try again
        if tail == len(copies) or tail * H.h >= 2 * tail_vertices:
            break
        tail = min(len(copies), tail + max(1, tail // 2))
    raise EmbedFailed("; ".join(notes) or "spanning embedding failed")


def dense_embed(G: HostGraph, F: TilingAssignment | TileGraph, xs: Sequence[int], ys: Sequence[int],
                rho=None, *, strict: bool = False, tail_vertices: int = SOLVER_TAIL_VERTICES,
                time_limit: float = 20.0) -> TilingAssignment:
    """Embed ``F`` into the dense pair ``G[xs, ys]``.

    ``F`` is either a tiling of the complete host ``K_{|xs|,|ys|}`` (the
    result is then a spanning tiling of the pair with the same pattern) or a
    single pattern graph (embedded once, leftovers reported).  The greedy
    pass is finished by the exact solver on the last few copies.  With
    ``strict`` a pair failing the ``1 - rho`` degree condition is rejected.
    """
    xs, ys = list(xs), list(ys)
    slack = degree_slack(G, xs, ys, rho)
    if strict and not slack.meets:
        raise PreconditionViolated(f"pair degree fractions {slack.min_x_fraction}, {slack.min_y_fraction} "
                                   f"below 1 - rho = {1 - slack.rho}")
    if isinstance(F, TileGraph):
        need_x = sum(len(c.U) for c in F.components)
        need_y = sum(len(c.W) for c in F.components)
        if need_x > len(xs) or need_y > len(ys):
            raise EmbedFailed(f"F needs {need_x}+{need_y} vertices, pair has {len(xs)}+{len(ys)}")
        xpool, ypool = set(xs), set(ys)
        try:
            pieces = embed_requests(G, F, [(0, i, False) for i in range(F.k_c)], xpool, ypool)
        except EmbedFailed:
            pieces = None
        if pieces is None and len(xs) + len(ys) <= SOLVER_TAIL_VERTICES:
            from .solver import max_h_tiling, SolveBudget

            found = max_h_tiling(G.induced(xs, ys), F, SolveBudget(time_limit=time_limit))
            if found.copies:
                first = [p for p in found.assignment.pieces if p.copy == found.assignment.copy_ids[0]]
                part = TilingAssignment(F, tuple(first)).relabel(xs, ys)
                pieces = [Piece(0, p.component, p.swapped, p.X_vertices, p.Y_vertices) for p in part.pieces]
        if pieces is None:
            raise EmbedFailed("F does not embed into the pair")
        used_x = {x for p in pieces for x in p.X_vertices}
        used_y = {y for p in pieces for y in p.Y_vertices}
        return TilingAssignment(F, tuple(pieces), tuple(x for x in xs if x not in used_x),
                                tuple(y for y in ys if y not in used_y),
                                {"degree_slack": slack.to_json()})
    shape = F
    shape_x = len(shape.used_X()) + len(shape.leftover_X)
    shape_y = len(shape.used_Y()) + len(shape.leftover_Y)
    if (shape_x, shape_y) != (len(xs), len(ys)) or not shape.perfect:
        raise EmbedFailed(f"shape covers K_{{{shape_x},{shape_y}}} (perfect={shape.perfect}), "
                          f"pair is {len(xs)} x {len(ys)}")
    outcome = _spanning(G, shape, xs, ys, tail_vertices, time_limit)
    meta = {"degree_slack": slack.to_json(), "greedy_copies": outcome.greedy_copies,
            "solver_copies": outcome.solver_copies, "restarts": outcome.restarts}
    return TilingAssignment(shape.pattern, tuple(outcome.pieces), (), (), meta)


# ---------------------------------------------------------------------------
# disjoint stars


@dataclass(frozen=True)
class StarHypotheses:
    delta: int
    M: Fraction
    c: Fraction
    failures: tuple[str, ...]

    @property
    def hold(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"delta": self.delta, "M": str(self.M), "c": str(self.c), "failures": list(self.failures)}


@dataclass(frozen=True)
class StarSet:
    """``need`` stars centred in each side; each star is ``(center, leaves)``."""

    in_v1: tuple[tuple[int, tuple[int, ...]], ...]
    in_v2: tuple[tuple[int, tuple[int, ...]], ...]
    hypotheses: StarHypotheses | None = None

    def vertices(self) -> tuple[set[int], set[int]]:
        """Used vertices of V1's side and V2's side."""
        side1 = {c for c, _ in self.in_v1} | {v for _, ls in self.in_v2 for v in ls}
        side2 = {c for c, _ in self.in_v2} | {v for _, ls in self.in_v1 for v in ls}
        return side1, side2

    def to_json(self) -> dict:
        out = {"in_v1": [[c, list(ls)] for c, ls in self.in_v1],
               "in_v2": [[c, list(ls)] for c, ls in self.in_v2]}
        if self.hypotheses is not None:
            out["hypotheses"] = self.hypotheses.to_json()
        return out


def star_hypotheses(G: HostGraph, V1: Sequence[int], V2: Sequence[int], k: int, need: int,
                    c=None) -> StarHypotheses:
    """Check the quantitative hypotheses of the disjoint-star lemma on ``G[V1, V2]``.

    ``V1`` lies in X and ``V2`` in Y.  ``delta`` is taken as the minimum
    degree from ``V1`` into ``V2`` and ``M`` as the mean side size.
    """
    c = Fraction(1, 6 * k + 8) if c is None else Fraction(c)
    m1, m2 = mask_of(V1), mask_of(V2)
    delta = min(((G.adj_x[v] & m2).bit_count() for v in V1), default=0)
    top = max(((G.adj_y[v] & m1).bit_count() for v in V2), default=0)
    M = Fraction(len(V1) + len(V2), 2)
    failures = []
    if not c < Fraction(1, 6 * k + 7):
        failures.append(f"c < 1/(6k+7) fails: c = {c}")
    if not k <= delta:
        failures.append(f"k <= delta(V1,V2) fails: {k} > {delta}")
    if not delta <= c * M:
        failures.append(f"delta(V1,V2) <= cM fails: {delta} > {float(c * M):.3f}")
    if not top <= c * M:
        failures.append(f"Delta(V2,V1) <= cM fails: {top} > {float(c * M):.3f}")
    for name, size in (("V1", len(V1)), ("V2", len(V2))):
        if not abs(size - M) <= c * M:
            failures.append(f"||{name}| - M| <= cM fails")
    if not need <= delta - k + 1:
        failures.append(f"need <= delta - k + 1 fails: {need} > {delta - k + 1}")
    return StarHypotheses(delta, M, c, tuple(failures))


def _greedy_stars(nbrs1: dict[int, set[int]], nbrs2: dict[int, set[int]], k: int, need: int,
                  center_key, leaf_key) -> tuple[list, list] | None:
    free1, free2 = set(nbrs1), set(nbrs2)
    stars = ([], [])
    # star index by leaf, for the one-step augmentation
    owner: list[dict[int, int]] = [{}, {}]
    nbr_maps = (nbrs1, nbrs2)
    frees = (free1, free2)

    def try_side(side: int) -> bool:
        nbrs, free_here, free_there = nbr_maps[side], frees[side], frees[1 - side]
        order = sorted(free_here, key=lambda v: (center_key(side, v), v))
        for center in order:
            avail = [v for v in nbrs[center] if v in free_there]
            if len(avail) < k:
                avail = avail + _augment(side, center, k - len(avail))
            if len(avail) < k:
                continue
            leaves = tuple(sorted(avail, key=lambda v: (leaf_key(1 - side, v), v))[:k])
            free_here.discard(center)
            for v in leaves:
                free_there.discard(v)
                owner[side][v] = len(stars[side])
            stars[side].append((center, leaves))
            return True
        return False

    def _augment(side: int, center: int, missing: int) -> list[int]:
        """Free leaves of ``center`` by re-pointing other stars of the same side."""
        freed = []
        free_there = frees[1 - side]
        for v in sorted(nbr_maps[side][center]):
            if len(freed) == missing:
                break
            idx = owner[side].get(v)
            if idx is None:
                continue
            other_center, leaves = stars[side][idx]
            spare = [x for x in nbr_maps[side][other_center] if x in free_there and x not in freed]
            if not spare:
                continue
            new = spare[0]
            stars[side][idx] = (other_center, tuple(new if x == v else x for x in leaves))
            free_there.discard(new)
            owner[side][new] = idx
            del owner[side][v]
            free_there.add(v)
            freed.append(v)
        return freed

    while len(stars[0]) < need or len(stars[1]) < need:
        for side in (0, 1):
            if len(stars[side]) < need and not try_side(side):
                return None
    return stars


def _exact_stars(nbrs1: dict[int, set[int]], nbrs2: dict[int, set[int]], k: int, need: int):
    from itertools import combinations

    slots = [0] * need + [1] * need
    chosen: list[tuple[int, tuple[int, ...]]] = []
    used: list[set[int]] = [set(), set()]
    maps = (nbrs1, nbrs2)

    def matching_bound() -> int:
        # disjoint stars contain a matching, one edge each
        match: dict[int, int] = {}

        def augment(x: int, seen: set[int]) -> bool:
            for y in nbrs1[x]:
                if y in used[1] or y in seen:
                    continue
                seen.add(y)
                if y not in match or augment(match[y], seen):
                    match[y] = x
                    return True
            return False

        return sum(augment(x, set()) for x in nbrs1 if x not in used[0])

    def go(i: int, floor: int) -> bool:
        if i == len(slots):
            return True
        if matching_bound() < len(slots) - i:
            return False
        side = slots[i]
        start = floor if i and slots[i - 1] == side else -1
        for center in sorted(maps[side]):
            if center <= start or center in used[side]:
                continue
            avail = sorted(v for v in maps[side][center] if v not in used[1 - side])
            for leaves in combinations(avail, k):
                used[side].add(center)
                used[1 - side].update(leaves)
                chosen.append((center, leaves))
                if go(i + 1, center):
                    return True
                chosen.pop()
                used[side].discard(center)
                used[1 - side].difference_update(leaves)
        return False

    if not go(0, -1):
        return None
    return chosen[:need], chosen[need:]


EXACT_STAR_LIMIT = 24


def find_disjoint_stars(G: HostGraph, V1: Sequence[int], V2: Sequence[int], k: int, need: int, *,
                        strict: bool = True, c=None,
                        center_key: Callable[[int, int], object] | None = None,
                        leaf_key: Callable[[int, int], object] | None = None) -> StarSet:
    """``need`` k-stars centred in ``V1`` (leaves in ``V2``) and ``need`` centred in ``V2``.

    ``V1`` must lie in X and ``V2`` in Y.  All ``2 * need`` stars are vertex
    disjoint.  Keys receive ``(side, vertex)`` with side 0 for ``V1`` and 1
    for ``V2``; by default centres and leaves are taken by increasing degree
    into the other part.  With ``strict`` the lemma's hypotheses must hold.
    """
    if need < 0 or k < 1:
        raise PreconditionViolated(f"need = {need} and k = {k} must be >= 0 and >= 1")
    if need == 0:
        return StarSet((), ())
    V1, V2 = sorted(set(V1)), sorted(set(V2))
    if set(V1) - set(range(G.nx)) or set(V2) - set(range(G.ny)):
        raise PreconditionViolated("V1 must index X and V2 must index Y")
    hyp = star_hypotheses(G, V1, V2, k, need, c)
    if strict and not hyp.hold:
        raise HypothesesUnmet("; ".join(hyp.failures))
    m1, m2 = mask_of(V1), mask_of(V2)
    nbrs1 = {v: set(bits(G.adj_x[v] & m2)) for v in V1}
    nbrs2 = {v: set(bits(G.adj_y[v] & m1)) for v in V2}
    deg = ({v: len(s) for v, s in nbrs1.items()}, {v: len(s) for v, s in nbrs2.items()})
    center_key = center_key or (lambda side, v: deg[side][v])
    leaf_key = leaf_key or (lambda side, v: deg[side][v])
    found = _greedy_stars(nbrs1, nbrs2, k, need, center_key, leaf_key)
    if found is None and len(V1) + len(V2) <= EXACT_STAR_LIMIT:
        found = _exact_stars(nbrs1, nbrs2, k, need)
    if found is None:
        raise SearchFailed(f"could not find {need} disjoint {k}-stars on each side")
    stars = StarSet(tuple(found[0]), tuple(found[1]), hyp)
    _verify_stars(G, stars, V1, V2, k, need)
    return stars


def _verify_stars(G: HostGraph, stars: StarSet, V1, V2, k: int, need: int) -> None:
    s1, s2 = set(V1), set(V2)
    seen1: set[int] = set()
    seen2: set[int] = set()
    for side, group in ((0, stars.in_v1), (1, stars.in_v2)):
        if len(group) != need:
            raise SearchFailed(f"side {side + 1} has {len(group)} stars, needed {need}")
        for center, leaves in group:
            if len(set(leaves)) != k:
                raise SearchFailed(f"star at {center} has {len(set(leaves))} leaves")
            here, there = (seen1, seen2) if side == 0 else (seen2, seen1)
            home, away = (s1, s2) if side == 0 else (s2, s1)
            if center in here or center not in home or any(v in there or v not in away for v in leaves):
                raise SearchFailed(f"star at {center} overlaps another star or leaves its part")
            for v in leaves:
                ok = G.has_edge(center, v) if side == 0 else G.has_edge(v, center)
                if not ok:
                    raise SearchFailed(f"star at {center} uses a non-edge to {v}")
            here.add(center)
            there.update(leaves)
