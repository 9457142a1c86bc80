"""Explicit tilings of complete bipartite hosts.

* :func:`factor_complete` builds an H-factor of ``K_{mu+t, mw-t}`` by
  swapping whole copies and then single components.
* :func:`feasible_corollary` decides whether a complete host falls in the
  ratio window where that construction is guaranteed to apply.
* :func:`kuw_almost_tiling` and :func:`kuw_deficit_tiling` pack ``K_{u,w}``
  into complete hosts and account for what is left uncovered.

Vertices are handed out in contiguous index blocks, copy by copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arithmetic import beta_coefficients, compute_hcf_family, compute_sigma
from .errors import DivisibilityViolation, HcfNotOne, PreconditionViolated, RatioViolation
from .graph import TileGraph
from .tiling import LeftoverReport, Piece, TilingAssignment, kuw_pattern, piece_sides


@dataclass(frozen=True)
class CompleteShape:
    m: int
    t: int
    q: int
    r: int

    def to_json(self) -> dict:
        return {"m": self.m, "t": self.t, "q": self.q, "r": self.r}


def swap_plan(H: TileGraph, m: int, t: int) -> list[list[bool]]:
    """Per copy, per component: does the piece sit swapped (``W`` in X)?"""
    u = compute_sigma(H)
    w = H.h - u
    plan = [[False] * H.k_c for _ in range(m)]
    if t == 0:
        return plan
    q, r = divmod(t, w - u)
    for copy in range(q):
        plan[copy] = [True] * H.k_c
    if r:
        beta = beta_coefficients(H)
        for j, b in enumerate(beta):
            if b > 0:
                # unswapped copies are q..m-1, lowest indices first
                for copy in range(q, q + r * b):
                    plan[copy][j] = True
            elif b < 0:
                for copy in range(0, -r * b):
                    plan[copy][j] = False
    return plan


def _check_preconditions(H: TileGraph, m: int, t: int) -> CompleteShape:
    u = compute_sigma(H)
    w = H.h - u
    if m < 1:
        raise PreconditionViolated(f"m = {m} must be positive")
    if t == 0:
        return CompleteShape(m, 0, 0, 0)
    if u == w:
        raise PreconditionViolated(f"t = {t} needs u < w, but u = w = {u}")
    if not 0 <= t <= m * (w - u):
        raise PreconditionViolated(
            f"t = {t} outside [0, m(w-u)] = [0, {m * (w - u)}]: a side would fall outside [mu, mw]")
    q, r = divmod(t, w - u)
    if r == 0:
        if q > m:
            raise PreconditionViolated(f"m >= q fails: m = {m}, q = {q}")
        return CompleteShape(m, t, q, r)
    try:
        beta = max(abs(b) for b in beta_coefficients(H))
    except HcfNotOne as exc:
        raise PreconditionViolated(f"r = {r} > 0 needs hcf_chi_c(H) = 1: {exc.detail}") from exc
    if not m >= r * beta + q:
        raise PreconditionViolated(f"m >= r*beta + q fails: {m} < {r}*{beta} + {q}")
    if not q >= r * beta:
        raise PreconditionViolated(f"q >= r*beta fails: {q} < {r}*{beta}")
    return CompleteShape(m, t, q, r)


def _layout(H: TileGraph, plan: list[list[bool]]) -> tuple[list[Piece], int, int]:
    pieces = []
    nx = ny = 0
    for copy, flags in enumerate(plan):
        for comp, swapped in enumerate(flags):
            xs, ys = piece_sides(H, comp, swapped)
            pieces.append(Piece(copy, comp, swapped,
                                tuple(range(nx, nx + len(xs))), tuple(range(ny, ny + len(ys)))))
            nx += len(xs)
            ny += len(ys)
    return pieces, nx, ny


def factor_complete(H: TileGraph, m: int, t: int, mirror: bool = True) -> TilingAssignment:
    """H-factor of the complete host ``K_{mu+t, mw-t}``.

    If the direct preconditions fail and ``mirror`` is set, the host is
    read with its sides exchanged (``t -> m(w-u) - t``) and the result is
    transposed back.
    """
    u = compute_sigma(H)
    w = H.h - u
    try:
        shape = _check_preconditions(H, m, t)
        flipped = False
    except PreconditionViolated:
        if not mirror or u == w or not 0 <= t <= m * (w - u):
            raise
        try:
            shape = _check_preconditions(H, m, m * (w - u) - t)
        except PreconditionViolated:
            _check_preconditions(H, m, t)  # re-raise the direct failure
            raise
        flipped = True
    pieces, nx, ny = _layout(H, swap_plan(H, shape.m, shape.t))
    assert (nx, ny) == (m * u + shape.t, m * w - shape.t), "side counts drifted"
    meta = {"construction": "complete", **shape.to_json(), "mirrored": flipped}
    result = TilingAssignment(H, tuple(pieces), meta=meta)
    if flipped:
        result = result.transposed()
        result.meta["t"] = t
    return result


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    reason: str
    m: int
    t: int
    ratio: Fraction
    window_low: Fraction
    m_bound: Fraction

    def to_json(self) -> dict:
        return {
            "feasible": self.feasible, "reason": self.reason, "m": self.m, "t": self.t,
            "ratio": str(self.ratio), "window": [str(self.window_low), "1"],
            "m_bound": str(self.m_bound),
        }


def feasible_corollary(H: TileGraph, size_x: int, size_y: int, gamma) -> Feasibility:
    """Ratio-window test for ``K_{size_x, size_y}``; ``gamma`` is taken as an exact rational."""
    gamma = Fraction(gamma)
    fam = compute_hcf_family(H)
    if not fam.indicator:
        raise HcfNotOne(f"needs hcf(H) = 1 (hcf_c = {fam.hcf_c}, hcf_chi = {fam.hcf_chi})")
    u = compute_sigma(H)
    w = H.h - u
    if not 0 < gamma < Fraction(w - u, u):
        raise PreconditionViolated(f"gamma = {gamma} outside (0, (w-u)/u) = (0, {Fraction(w - u, u)})")
    if (size_x + size_y) % H.h:
        raise DivisibilityViolation(f"h = {H.h} must divide |X|+|Y| = {size_x + size_y}")
    m = (size_x + size_y) // H.h
    t = size_x - m * u
    beta = max(abs(b) for b in beta_coefficients(H))
    bound = Fraction((w - u) ** 2) * (H.h + u * gamma) * beta / (u * w * gamma)
    low = (1 + gamma) * Fraction(u, w)
    if size_x < 0 or size_y < 1:
        raise PreconditionViolated(f"host sides must be positive, got {size_x}, {size_y}")
    ratio = Fraction(size_x, size_y)
    if not low <= ratio <= 1:
        return Feasibility(False, "ratio outside window", m, t, ratio, low, bound)
    if m < bound:
        return Feasibility(False, "m below admissibility bound", m, t, ratio, low, bound)
    return Feasibility(True, "ok", m, t, ratio, low, bound)


def _kuw_layout(u: int, w: int, n_w_in_y: int, n_w_in_x: int, size_x: int, size_y: int):
    H = kuw_pattern(u, w)
    plan = [[False]] * n_w_in_y + [[True]] * n_w_in_x
    pieces, nx, ny = _layout(H, plan)
    leftover_x = tuple(range(nx, size_x))
    leftover_y = tuple(range(ny, size_y))
    return H, pieces, leftover_x, leftover_y


def _best_counts(u: int, w: int, size_x: int, size_y: int) -> tuple[int, int]:
    """Most copies (then fewest with the w-side in X) fitting in ``K_{size_x, size_y}``."""
    best = (0, 0)
    for n_x in range(size_x // w + 1):
        n_y = min((size_x - n_x * w) // u, (size_y - n_x * u) // w) if size_y >= n_x * u else -1
        if n_y >= 0 and (n_y + n_x, -n_x) > (sum(best), -best[1]):
            best = (n_y, n_x)
    return best


def kuw_almost_tiling(u: int, w: int, size_x: int, size_y: int) -> tuple[TilingAssignment, LeftoverReport]:
    """Pack ``K_{u,w}`` into ``K_{size_x, size_y}`` leaving at most ``h + (w-u) - 2`` vertices."""
    if not 1 <= u < w:
        raise PreconditionViolated(f"needs 1 <= u < w, got u = {u}, w = {w}")
    if size_y < 1 or not Fraction(u, w) <= Fraction(size_x, size_y) <= 1:
        raise RatioViolation(f"|X|/|Y| = {size_x}/{size_y} outside [{u}/{w}, 1]")
    h = u + w
    m, r = divmod(size_x + size_y, h)
    t = size_x - m * u
    q, p = divmod(t, w - u)
    if m == 0:
        n_y, n_x, branch = 0, 0, "empty"
    elif p <= r and q <= m:
        n_y, n_x, branch = m - q, q, "p<=r"
    elif q + 1 <= m:
        n_y, n_x, branch = m - q - 1, q, "p>r"
    else:
        # tiny hosts can have q > m; take the best orientation counts directly
        n_y, n_x = _best_counts(u, w, size_x, size_y)
        branch = "small"
    H, pieces, lx, ly = _kuw_layout(u, w, n_y, n_x, size_x, size_y)
    report = LeftoverReport(len(lx), len(ly), m, r, p, q, branch, n_y)
    return TilingAssignment(H, tuple(pieces), lx, ly, {"construction": "kuw-almost", **report.to_json()}), report


def kuw_deficit_tiling(u: int, w: int, m: int, c: int) -> tuple[TilingAssignment, LeftoverReport]:
    """Pack ``K_{u,w}`` into ``K_{mu-c, mw+c}``, leaving at most ``(c+u-1)h/u`` vertices."""
    if not 1 <= u <= w:
        raise PreconditionViolated(f"needs 1 <= u <= w, got u = {u}, w = {w}")
    if not m > c >= 0:
        raise PreconditionViolated(f"needs m > c >= 0, got m = {m}, c = {c}")
    p, q_rem = divmod(c, u)
    copies = m - p if q_rem == 0 else m - p - 1
    size_x, size_y = m * u - c, m * w + c
    H, pieces, lx, ly = _kuw_layout(u, w, copies, 0, size_x, size_y)
    report = LeftoverReport(len(lx), len(ly), m, 0, p, q_rem, "q'=0" if q_rem == 0 else "q'>0", copies)
    return TilingAssignment(H, tuple(pieces), lx, ly, {"construction": "kuw-deficit", **report.to_json()}), report
