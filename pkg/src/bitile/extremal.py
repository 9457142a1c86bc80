"""Constructive H-factors for hosts close to the two-block extremal shape.

The host comes with a certificate ``A ⊂ X``, ``B ⊂ Y`` of size
``floor(wn/h)`` spanning few edges.  Vertices are sorted into six classes by
their degree into ``B`` (resp. ``A``), the class orders are repaired so that
both dense halves have order divisible by ``h``, a few star centres are moved
across to fix the side counts, stray vertices are absorbed by ``K_{u,w}``
copies, and the two near-complete halves are finished by embedding an
explicit factor of the complete host.  Every run ends with
:func:`validate_tiling`; nothing is trusted on faith.

Two parameters control classification.  ``alpha`` bounds the density of
the certificate pair; ``theta`` is the degree cut-off that separates the
classes.  Asymptotically ``theta = alpha^(1/3)``; at a few hundred vertices
per side that choice cannot be met (every vertex of ``A`` has at least
``c1(H)`` neighbours in ``B``), so the two are set independently and the
claimed class bounds are checked with ``theta`` in place of ``alpha^(1/3)``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arithmetic import beta_coefficients, compute_hcf_family, compute_sigma, constants, zeta_coefficients
from .embedding import dense_embed, embed_requests, find_disjoint_stars
from .errors import (BitileError, DivisibilityViolation, EmbedFailed, HcfNotOne, NotExtremal,
                     PipelineStageFailed, PreconditionViolated, SearchFailed, Unbalanced)
from .graph import HostGraph, TileGraph, bits, mask_of
from .regularity import as_fraction
from .tiling import Piece, TilingAssignment, combine, make_piece, piece_sides

DESK_ALPHA = Fraction(9, 20)
DESK_THETA = Fraction(9, 20)


@dataclass(frozen=True)
class DenseEmbedConfig:
    """``rho``: degree slack of the dense finish; ``alpha``/``theta``: see the module notes."""

    rho: Fraction
    alpha: Fraction
    theta: Fraction

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise PreconditionViolated(f"rho = {self.rho} must lie in (0, 1)")
        if not 0 < self.theta < Fraction(1, 2):
            raise PreconditionViolated(f"theta = {self.theta} must lie in (0, 1/2)")
        if not 0 < self.alpha <= 1:
            raise PreconditionViolated(f"alpha = {self.alpha} must lie in (0, 1]")

    @staticmethod
    def root_from_rho(H: TileGraph, rho) -> Fraction:
        """``alpha^(1/3)`` tied to ``rho``: ``min{1/(5h^2), rho/(2h)}``."""
        rho = as_fraction(rho)
        return min(Fraction(1, 5 * H.h * H.h), rho / (2 * H.h))

    @classmethod
    def for_pattern(cls, H: TileGraph, rho=None, alpha=None, theta=None) -> "DenseEmbedConfig":
        """Desk-scale defaults: ``rho = 1/(4h)``, ``alpha = theta = 9/20``."""
        rho = Fraction(1, 4 * H.h) if rho is None else as_fraction(rho)
        alpha = DESK_ALPHA if alpha is None else as_fraction(alpha)
        theta = DESK_THETA if theta is None else as_fraction(theta)
        return cls(rho, alpha, theta)

    @classmethod
    def asymptotic(cls, H: TileGraph, rho=None) -> "DenseEmbedConfig":
        """``alpha`` and ``theta`` derived from ``rho`` exactly."""
        rho = Fraction(1, 4 * H.h) if rho is None else as_fraction(rho)
        root = cls.root_from_rho(H, rho)
        return cls(rho, root ** 3, root)

    def to_json(self) -> dict:
        return {"rho": str(self.rho), "alpha": str(self.alpha), "theta": str(self.theta)}


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: Fraction
    relation: str   # "<=" or ">="
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs if self.relation == "<=" else self.lhs >= self.rhs

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": str(self.lhs), "relation": self.relation,
                "rhs": str(self.rhs), "holds": self.holds}


@dataclass
class ExtremalPartition:
    A: tuple[int, ...]
    B: tuple[int, ...]
    alpha: Fraction
    theta: Fraction
    density: Fraction
    A1: tuple[int, ...]
    A2: tuple[int, ...]
    A0: tuple[int, ...]
    B1: tuple[int, ...]
    B2: tuple[int, ...]
    B0: tuple[int, ...]
    checks: list[InequalityCheck]
    degree_hypothesis: bool
    m1: int | None = None
    m2: int | None = None
    s: int | None = None
    t: int | None = None

    @property
    def failed_checks(self) -> list[InequalityCheck]:
        return [c for c in self.checks if not c.holds]

    @property
    def all_checks_hold(self) -> bool:
        return not self.failed_checks

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha), "theta": str(self.theta), "density": str(self.density),
            "classes": {name: list(getattr(self, name)) for name in ("A1", "A2", "A0", "B1", "B2", "B0")},
            "sizes": {name: len(getattr(self, name)) for name in ("A1", "A2", "A0", "B1", "B2", "B0")},
            "degree_hypothesis": self.degree_hypothesis,
            "checks": [c.to_json() for c in self.checks],
            "bookkeeping": {"m1": self.m1, "m2": self.m2, "s": self.s, "t": self.t},
        }


def _min_into(rows, S: Sequence[int], T_mask: int) -> int | None:
    return min(((rows[v] & T_mask).bit_count() for v in S), default=None)


def _max_into(rows, S: Sequence[int], T_mask: int) -> int | None:
    return max(((rows[v] & T_mask).bit_count() for v in S), default=None)


def _claim_checks(G: HostGraph, size: int, comp_size: int, theta: Fraction, u: int, w: int,
                  cls: dict[str, list[int]]) -> list[InequalityCheck]:
    """The four groups of class bounds, with ``theta`` for ``alpha^(1/3)``."""
    sq = theta * theta
    A = Fraction(size)
    Ac = Fraction(comp_size)
    masks = {k: mask_of(v) for k, v in cls.items()}
    out = []
    for name in ("A1", "B1"):
        out.append(InequalityCheck(f"part1: |{name}| >= (1-theta^2)|A|", Fraction(len(cls[name])), ">=", (1 - sq) * A))
        out.append(InequalityCheck(f"part1: |{name}| <= (1+theta^2)|A|", Fraction(len(cls[name])), "<=", (1 + sq) * A))
    for name in ("A2", "B2"):
        out.append(InequalityCheck(f"part1: |{name}| >= |A^c| - theta^2|A|", Fraction(len(cls[name])), ">=", Ac - sq * A))
        out.append(InequalityCheck(f"part1: |{name}| <= |A^c| + theta^2|A|", Fraction(len(cls[name])), "<=", Ac + sq * A))

    def mindeg(rows, S, T):
        value = _min_into(rows, cls[S], masks[T])
        return None if value is None else Fraction(value)

    ratio = Fraction(w, u)
    for label, rows, S, T, factor in (
        ("delta(B2,A1) >= (1-2theta)|A1|", G.adj_y, "B2", "A1", 2 * theta),
        ("delta(A2,B1) >= (1-2theta)|B1|", G.adj_x, "A2", "B1", 2 * theta),
        ("delta(A1,B2) >= (1-2theta w/u)|B2|", G.adj_x, "A1", "B2", 2 * theta * ratio),
        ("delta(B1,A2) >= (1-2theta w/u)|A2|", G.adj_y, "B1", "A2", 2 * theta * ratio),
    ):
        value = mindeg(rows, S, T)
        if value is not None:
            out.append(InequalityCheck(f"part2: {label}", value, ">=", (1 - factor) * len(cls[T])))
    for label, rows, S, T in (("Delta(B1,A1)", G.adj_y, "B1", "A1"), ("Delta(A1,B1)", G.adj_x, "A1", "B1")):
        value = _max_into(rows, cls[S], masks[T])
        if value is not None:
            out.append(InequalityCheck(f"part3: {label} <= (theta^2+theta)|A|", Fraction(value), "<=",
                                       (sq + theta) * A))
    for name in ("A0", "B0"):
        out.append(InequalityCheck(f"part4: |{name}| <= 2theta^2|A|", Fraction(len(cls[name])), "<=", 2 * sq * A))
    for label, rows, S, T in (("delta(A0,B1)", G.adj_x, "A0", "B1"), ("delta(B0,A1)", G.adj_y, "B0", "A1")):
        value = mindeg(rows, S, T)
        if value is not None:
            out.append(InequalityCheck(f"part4: {label} >= (theta-theta^2)|A|", value, ">=", (theta - sq) * A))
    return out


def _cube_root(value: Fraction) -> Fraction:
    num, den = round(value.numerator ** (1 / 3)), round(value.denominator ** (1 / 3))
    if den and Fraction(num, den) ** 3 == value:
        return Fraction(num, den)
    return Fraction(float(value) ** (1 / 3)).limit_denominator(10 ** 9)


def classify_extremal(G: HostGraph, H: TileGraph, A: Sequence[int], B: Sequence[int], alpha,
                      theta=None) -> ExtremalPartition:
    """Split X and Y into the six degree classes relative to the certificate ``(A, B)``.

    ``theta`` defaults to ``alpha^(1/3)`` and must be below 1/2.
    """
    if G.nx != G.ny:
        raise Unbalanced(f"host sides {G.nx} and {G.ny} differ")
    n = G.nx
    u = compute_sigma(H)
    w = H.h - u
    size = w * n // H.h
    A, B = tuple(sorted(set(A))), tuple(sorted(set(B)))
    if len(A) != size or len(B) != size:
        raise PreconditionViolated(f"|A| = {len(A)}, |B| = {len(B)}; both must be floor(wn/h) = {size}")
    if any(not 0 <= x < n for x in A) or any(not 0 <= y < n for y in B):
        raise PreconditionViolated("A and B must index X and Y")
    alpha = as_fraction(alpha)
    theta = _cube_root(alpha) if theta is None else as_fraction(theta)
    if not 0 < theta < Fraction(1, 2):
        raise PreconditionViolated(f"theta = {theta} must lie in (0, 1/2)")
    dens = G.density(A, B)
    if dens > alpha:
        raise NotExtremal(f"d(A,B) = {dens} > alpha = {alpha}")
    amask, bmask = mask_of(A), mask_of(B)
    cls: dict[str, list[int]] = {k: [] for k in ("A1", "A2", "A0", "B1", "B2", "B0")}
    for side, rows, mask, tag in (("X", G.adj_x, bmask, "A"), ("Y", G.adj_y, amask, "B")):
        for v, row in enumerate(rows):
            d = (row & mask).bit_count()
            if d < theta * size:
                cls[tag + "1"].append(v)
            elif d > (1 - theta) * size:
                cls[tag + "2"].append(v)
            else:
                cls[tag + "0"].append(v)
    checks = _claim_checks(G, size, n - size, theta, u, w, cls)
    degree_ok = G.min_degree >= Fraction(u * n, H.h)
    return ExtremalPartition(A, B, alpha, theta, dens, *(tuple(cls[k]) for k in
                             ("A1", "A2", "A0", "B1", "B2", "B0")), checks, degree_ok)


# ---------------------------------------------------------------------------
# pipeline


class _Run:
    """Mutable state of one pipeline run; classes shrink as copies are placed."""

    def __init__(self, G: HostGraph, H: TileGraph, part: ExtremalPartition, config: DenseEmbedConfig):
        self.G = G
        self.H = H
        self.config = config
        self.u = compute_sigma(H)
        self.w = H.h - self.u
        self.sets = {k: set(getattr(part, k)) for k in ("A1", "A2", "A0", "B1", "B2", "B0")}
        self.part = part
        self.parts: list[TilingAssignment] = []
        self.flipped = False
        self.trace: list[dict] = []
        self.next_copy = 0
        # stars waiting for K_{u,w} completion: ("G1" | "G2", center, leaves)
        self.pending: list[tuple[str, int, tuple[int, ...]]] = []

    # helpers -----------------------------------------------------------
    def fail(self, stage: str, detail: str):
        raise PipelineStageFailed(detail, stage=stage)

    def log(self, stage: str, **info) -> None:
        self.trace.append({"stage": stage, **info})

    def add(self, pieces: list[Piece]) -> None:
        self.parts.append(TilingAssignment(self.H, tuple(pieces)))

    def transpose(self) -> None:
        self.G = self.G.transpose()
        s = self.sets
        for i in ("1", "2", "0"):
            s["A" + i], s["B" + i] = s["B" + i], s["A" + i]
        self.parts = [p.transposed() for p in self.parts]
        self.flipped = not self.flipped

    def embed(self, requests, xpool: set[int], ypool: set[int], stage: str) -> list[Piece]:
        try:
            return embed_requests(self.G, self.H, requests, xpool, ypool)
        except EmbedFailed as exc:
            self.fail(stage, exc.detail)

    def orders(self) -> tuple[int, int]:
        s = self.sets
        return (len(s["A1"]) + len(s["B2"]) + len(s["B0"]),
                len(s["B1"]) + len(s["A2"]) + len(s["A0"]))

    # stages ------------------------------------------------------------
    def odd_reduction(self) -> None:
        """Remove ``k1 + k2`` copies so the remaining order is a multiple of ``2h``."""
        H, u, w, h = self.H, self.u, self.w, self.H.h
        odd = [i for i, c in enumerate(H.c) if c % 2]
        if h % 2 or not odd:
            self.fail("odd-m", f"odd m needs h even and an odd component (h = {h})")
        i = odd[0]
        d_i = H.d[i]
        first, second = u + d_i, w - d_i          # class sizes after swapping component i
        u2, w2 = min(first, second), max(first, second)
        k1, k2 = h // 2 - u2, h // 2 - u
        loss_x, loss_y = k1 * u + k2 * w2, k1 * w + k2 * u2
        if loss_x != loss_y:
            self.fail("odd-m", f"k1*u + k2*w' = {loss_x} != k1*w + k2*u' = {loss_y}")
        # W' in X: U' is U - U_i + W_i when that class is the smaller one
        others_swapped = first <= second
        requests = []
        for _ in range(k1):
            requests += [(self.next_copy, j, False) for j in range(H.k_c)]
            self.next_copy += 1
        for _ in range(k2):
            requests += [(self.next_copy, j, (j != i) == others_swapped) for j in range(H.k_c)]
            self.next_copy += 1
        pieces = self.embed(requests, self.sets["A1"], self.sets["B2"], "odd-m")
        self.add(pieces)
        self.log("odd-m", component=i, u_prime=u2, w_prime=w2, k1=k1, k2=k2,
                 loss_x=loss_x, loss_y=loss_y, identity="k1*u + k2*w' = k1*w + k2*u'")

    def divisibility_repair(self) -> None:
        """Remove ``2 r zeta`` copies split between the halves so both orders divide by ``h``."""
        H, h = self.H, self.H.h
        v1, v2 = self.orders()
        if (v1 + v2) % (2 * h):
            self.fail("divisibility", f"remaining order {v1 + v2} is not a multiple of 2h")
        r = v1 % h
        zeta = zeta_coefficients(H)
        z = max(abs(x) for x in zeta)
        before_x = sum(len(self.sets[k]) for k in ("A1", "A2", "A0"))
        before_y = sum(len(self.sets[k]) for k in ("B1", "B2", "B0"))
        first = self.next_copy
        slots = [first] * H.k_c
        req1, req2 = [], []
        for i, zi in enumerate(zeta):
            g1, g2 = r * (z + zi), r * (z - zi)
            flags1 = [True] * ((g1 + 1) // 2) + [False] * (g1 // 2)
            flags2 = [True] * (g2 // 2) + [False] * ((g2 + 1) // 2)
            for swapped in flags1:
                req1.append((slots[i], i, swapped))
                slots[i] += 1
            for swapped in flags2:
                req2.append((slots[i], i, swapped))
                slots[i] += 1
        self.next_copy = first + 2 * r * z
        pieces = self.embed(req1, self.sets["A1"], self.sets["B2"], "divisibility")
        pieces += self.embed(req2, self.sets["A2"], self.sets["B1"], "divisibility")
        self.add(pieces)
        lost_x = before_x - sum(len(self.sets[k]) for k in ("A1", "A2", "A0"))
        lost_y = before_y - sum(len(self.sets[k]) for k in ("B1", "B2", "B0"))
        n1, n2 = self.orders()
        self.log("divisibility", r=r, zeta=z, copies=2 * r * z, lost_x=lost_x, lost_y=lost_y,
                 lost_g1=v1 - n1, lost_g2=v2 - n2, order_g1=n1, order_g2=n2)
        if lost_x != r * z * h or lost_y != r * z * h:
            self.fail("divisibility", f"X lost {lost_x}, Y lost {lost_y}; each should lose r*zeta*h = {r * z * h}")
        if n1 % h or n2 % h:
            self.fail("divisibility", f"v(G1) = {n1}, v(G2) = {n2} not both divisible by h = {h}")

    def bookkeeping(self) -> tuple[int, int, int, int]:
        h, u, w = self.H.h, self.u, self.w
        v1, v2 = self.orders()
        m1, m2 = v1 // h, v2 // h
        if m1 < m2:
            self.transpose()
            self.log("transpose", reason=f"m1 = {m1} < m2 = {m2}")
            v1, v2 = self.orders()
            m1, m2 = v1 // h, v2 // h
        s_ = self.sets
        s = len(s_["A1"]) - m1 * w
        t = len(s_["B1"]) - m2 * w
        if len(s_["A2"]) + len(s_["A0"]) != m2 * u - t or len(s_["B2"]) + len(s_["B0"]) != m1 * u - s:
            self.fail("bookkeeping", "|A2~| = m2 u - t and |B2~| = m1 u - s do not both hold")
        if t < s or (t - s) % (w - u):
            self.fail("bookkeeping", f"(m1-m2)(w-u) = 2(t-s) with w-u | t-s fails: s = {s}, t = {t}")
        self.part.m1, self.part.m2, self.part.s, self.part.t = m1, m2, s, t
        self.log("bookkeeping", m1=m1, m2=m2, s=s, t=t)
        return m1, m2, s, t

    def min_deg_b1_a1(self) -> int:
        amask = mask_of(self.sets["A1"])
        return _min_into(self.G.adj_y, sorted(self.sets["B1"]), amask) or 0

    def choose_case(self, s: int, t: int) -> int:
        u, w = self.u, self.w
        slack = self.min_deg_b1_a1() - w + 1
        if t >= 0:
            self.log("case", case="1", moves=t, inequality=f"delta(B1',A1') - w + 1 = {slack} > t = {t}",
                     holds=slack > t)
            return t
        q, p = divmod(-t, w - u)
        q2 = (-s - p) // (w - u)
        beta = 0
        if p:
            try:
                beta = max(abs(b) for b in beta_coefficients(self.H))
            except HcfNotOne as exc:
                self.fail("case", exc.detail)
        if q >= p * beta:
            self.log("case", case="2a", q=q, p=p, q_prime=q2, beta=beta, moves=0,
                     inequality=f"q = {q} >= p*beta = {p * beta}", holds=True)
            return 0
        moves = w - u - p
        self.log("case", case="2b", q=q, p=p, q_prime=q2, beta=beta, moves=moves,
                 inequality=f"delta(B1,A1) - w + 1 = {slack} >= w-u-p = {moves}", holds=slack >= moves)
        return moves

    def relocate(self, moves: int) -> None:
        """Move ``moves`` star centres A1 -> A2~ and B1 -> B2~."""
        if not moves:
            return
        G, s = self.G, self.sets
        b2 = mask_of(s["B2"])
        a2 = mask_of(s["A2"])

        # leaves of a star centred in A1 sit in B1 and later need common neighbours in A2
        def leaf_key(side, v):
            return -((G.adj_y[v] & a2).bit_count() if side == 1 else (G.adj_x[v] & b2).bit_count())

        try:
            stars = find_disjoint_stars(G, sorted(s["A1"]), sorted(s["B1"]), self.w, moves,
                                        strict=False, leaf_key=leaf_key)
        except SearchFailed as exc:
            self.fail("relocate", f"{exc.detail}; needs delta(B1',A1') - w + 1 >= {moves}")
        for center, leaves in stars.in_v1:
            s["A1"].discard(center)
            self.pending.append(("G2", center, leaves))
        for center, leaves in stars.in_v2:
            s["B1"].discard(center)
            self.pending.append(("G1", center, leaves))
        self.reserved_x = {v for _, ls in stars.in_v2 for v in ls}
        self.reserved_y = {v for _, ls in stars.in_v1 for v in ls}
        self.log("relocate", moves=moves, hypotheses=stars.hypotheses.to_json() if stars.hypotheses else None)

    def absorb(self) -> None:
        """Give every B0/A0 vertex a w-star, then complete all stars to ``K_{u,w}`` copies."""
        G, s, u, w = self.G, self.sets, self.u, self.w
        reserved_x = getattr(self, "reserved_x", set())
        reserved_y = getattr(self, "reserved_y", set())
        for half, center_set, leaf_set, rows, core in (("G1", "B0", "A1", G.adj_y, "B2"),
                                                       ("G2", "A0", "B1", G.adj_x, "A2")):
            reserved = reserved_x if half == "G1" else reserved_y
            core_mask = mask_of(s[core])
            leaf_rows = G.adj_x if half == "G1" else G.adj_y
            for center in sorted(s[center_set]):
                avail = [v for v in bits(rows[center] & mask_of(s[leaf_set])) if v not in reserved]
                if len(avail) < w:
                    self.fail("absorb", f"{center_set} vertex {center} has {len(avail)} free neighbours "
                                        f"in {leaf_set}, needs w = {w}")
                avail.sort(key=lambda v: (-(leaf_rows[v] & core_mask).bit_count(), v))
                leaves = tuple(avail[:w])
                reserved.update(leaves)
                self.pending.append((half, center, leaves))
            s[center_set].clear()
        # complete stars, tightest common neighbourhood first
        order = []
        for half, center, leaves in self.pending:
            core = "B2" if half == "G1" else "A2"
            leaf_rows = G.adj_x if half == "G1" else G.adj_y
            common = mask_of(s[core])
            for v in leaves:
                common &= leaf_rows[v]
            order.append((common.bit_count(), half, center, leaves))
        order.sort()
        placed = 0
        for _, half, center, leaves in order:
            core, leaf_set = ("B2", "A1") if half == "G1" else ("A2", "B1")
            leaf_rows = G.adj_x if half == "G1" else G.adj_y
            core_rows = G.adj_y if half == "G1" else G.adj_x
            common = mask_of(s[core])
            for v in leaves:
                common &= leaf_rows[v]
            cands = bits(common)
            if len(cands) < u - 1:
                self.fail("absorb", f"|common neighbourhood of star leaves in {core}'| = {len(cands)} "
                                    f"< u - 1 = {u - 1}")
            leaf_mask = mask_of(s[leaf_set])
            cands.sort(key=lambda v: (-(core_rows[v] & leaf_mask).bit_count(), v))
            small = [center] + cands[:u - 1]
            for v in cands[:u - 1]:
                s[core].discard(v)
            for v in leaves:
                s[leaf_set].discard(v)
            # G1: the w leaves are in X, so every component is swapped
            self.add(self.kuw_copy(list(leaves), small, swapped=(half == "G1")))
            placed += 1
        self.log("absorb", copies=placed)
        self.pending = []

    def kuw_copy(self, big: list[int], small: list[int], swapped: bool) -> list[Piece]:
        """One copy of H spanning a complete ``K_{w,u}`` with W on ``big`` and U on ``small``."""
        H = self.H
        copy = self.next_copy
        self.next_copy += 1
        pieces = []
        wi = ui = 0
        for j, comp in enumerate(H.components):
            image = {}
            for v in comp.W:
                image[v] = big[wi]
                wi += 1
            for v in comp.U:
                image[v] = small[ui]
                ui += 1
            pieces.append(make_piece(H, copy, j, swapped, image))
        return pieces

    def finish(self) -> None:
        """Factor both near-complete halves with an explicit complete-host shape."""
        from .complete import factor_complete

        H, s, h, u = self.H, self.sets, self.H.h, self.u
        for half, xs, ys in (("G1", s["A1"], s["B2"]), ("G2", s["A2"], s["B1"])):
            xs, ys = sorted(xs), sorted(ys)
            total = len(xs) + len(ys)
            if total % h:
                self.fail(f"finish-{half}", f"remaining order {total} not divisible by h = {h}")
            if not total:
                continue
            m = total // h
            try:
                shape = factor_complete(H, m, len(xs) - m * u)
            except BitileError as exc:
                self.fail(f"finish-{half}", f"complete host K_{{{len(xs)},{len(ys)}}} has no explicit "
                                            f"factor: {exc.detail}")
            try:
                tiling = dense_embed(self.G, shape, xs, ys, self.config.rho)
            except EmbedFailed as exc:
                self.fail(f"finish-{half}", exc.detail)
            self.parts.append(tiling)
            self.log(f"finish-{half}", sides=[len(xs), len(ys)], copies=m, shape=shape.meta,
                     embed=tiling.meta)
            s["A1" if half == "G1" else "A2"].clear()
            s["B2" if half == "G1" else "B1"].clear()


def tile_extremal(G: HostGraph, H: TileGraph, A: Sequence[int], B: Sequence[int],
                  config: DenseEmbedConfig | None = None, *, check_degree: bool = True) -> TilingAssignment:
    """H-factor of a near-extremal host; ``meta`` carries the stage trace.

    ``check_degree=False`` skips the minimum-degree gate (useful on hosts that
    are factorable for other reasons, e.g. two complete blocks).
    """
    from .solver import validate_tiling

    fam = compute_hcf_family(H)
    if not fam.indicator:
        raise HcfNotOne(f"needs hcf(H) = 1 (hcf_c = {fam.hcf_c}, hcf_chi = {fam.hcf_chi})")
    u = compute_sigma(H)
    w = H.h - u
    if u == w:
        raise PreconditionViolated("the extremal pipeline needs u < w")
    if G.nx != G.ny:
        raise Unbalanced(f"host sides {G.nx} and {G.ny} differ")
    n = G.nx
    if (2 * n) % H.h:
        raise DivisibilityViolation(f"h = {H.h} must divide 2n = {2 * n}")
    m = 2 * n // H.h
    config = config or DenseEmbedConfig.for_pattern(H)
    need = Fraction(u * n, H.h) + constants(H).c1_ceil
    if check_degree and G.min_degree < need:
        raise PreconditionViolated(f"delta(G) = {G.min_degree} < (u/h)n + ceil(c1) = {need}", stage="gate")
    part = classify_extremal(G, H, A, B, config.alpha, config.theta)
    if not part.all_checks_hold:
        raise PipelineStageFailed("; ".join(f"{c.name}: {c.lhs} vs {c.rhs}" for c in part.failed_checks),
                                  stage="classify")
    run = _Run(G, H, part, config)
    run.log("classify", sizes={k: len(v) for k, v in run.sets.items()}, density=str(part.density))
    if m % 2:
        run.odd_reduction()
    run.divisibility_repair()
    m1, m2, s, t = run.bookkeeping()
    moves = run.choose_case(s, t)
    run.relocate(moves)
    run.absorb()
    run.finish()
    if run.flipped:
        run.transpose()
    result = combine(H, run.parts, meta={"trace": run.trace, "partition": part.to_json(),
                                         "config": config.to_json()})
    report = validate_tiling(G, H, result)
    if not report.ok or not result.perfect:
        raise PipelineStageFailed(f"{report.status}: {report.detail}", stage="validate")
    return result


# ---------------------------------------------------------------------------
# test hosts


def near_extremal_host(H: TileGraph, n: int, seed: int = 0, deletion_rate: float = 0.02,
                       mid_x: int | None = None, mid_y: int | None = None,
                       shuffle: bool = True) -> tuple[HostGraph, list[int], list[int]]:
    """A perturbed two-block host with minimum degree ``(u/h)n + ceil(c1)`` and its certificate.

    Start from ``K_{a-1, n-a+1}`` and ``K_{n-a+1, a-1}`` with ``a = ceil(nu/h)``, delete a
    sparse random set of in-block edges, turn a few vertices into middling
    ones (about half their neighbours in the certificate set), then add
    cross edges until every degree reaches the target.  Returns
    ``(G, A, B)``.
    """
    u = compute_sigma(H)
    if (2 * n) % H.h:
        raise DivisibilityViolation(f"h = {H.h} must divide 2n = {2 * n}")
    rng = random.Random(seed)
    target = math.ceil(Fraction(n * u, H.h)) + constants(H).c1_ceil
    if target > n:
        raise PreconditionViolated(f"degree target {target} exceeds n = {n}; use a larger n")
    small = math.ceil(Fraction(n * u, H.h)) - 1
    large = n - small
    X1, X2 = list(range(small)), list(range(small, n))
    Y1, Y2 = list(range(large)), list(range(large, n))
    adj = [set() for _ in range(n)]
    for xs, ys in ((X1, Y1), (X2, Y2)):
        for x in xs:
            for y in ys:
                if rng.random() >= deletion_rate:
                    adj[x].add(y)
    mid_x = rng.randint(0, 3) if mid_x is None else mid_x
    mid_y = rng.randint(0, 3) if mid_y is None else mid_y
    mids_x = rng.sample(X2, mid_x)
    mids_y = rng.sample(Y1, mid_y)
    excluded_x = mids_x[0] if mids_x else rng.choice(X2)
    excluded_y = mids_y[0] if mids_y else rng.choice(Y1)
    A = [x for x in X2 if x != excluded_x]
    B = [y for y in Y1 if y != excluded_y]
    half = len(B) // 2
    for x in mids_x:
        for y in rng.sample(B, half):
            adj[x].add(y)
    radj = [set() for _ in range(n)]
    for x in range(n):
        for y in adj[x]:
            radj[y].add(x)
    for y in mids_y:
        for x in rng.sample(A, half):
            if y not in adj[x]:
                adj[x].add(y)
                radj[y].add(x)

    def link(x, y):
        adj[x].add(y)
        radj[y].add(x)

    # cross edges between the two large sides, spreading the load
    for x in rng.sample(X2, len(X2)):
        while len(adj[x]) < target:
            pool = [y for y in Y1 if y not in adj[x]]
            y = max(pool, key=lambda y: (target - len(radj[y]), rng.random()))
            link(x, y)
    in_y1 = set(Y1)
    for y in rng.sample(Y1, len(Y1)):
        while len(radj[y]) < target:
            pool = [x for x in X2 if y not in adj[x]]
            x = min(pool, key=lambda x: (len(adj[x] & in_y1), rng.random()))
            link(x, y)
    # the small sides may also fall short at small n: restore deletions first
    in_y2, in_x2 = set(Y2), set(X2)
    for x in X1:
        while len(adj[x]) < target:
            pool = [y for y in range(n) if y not in adj[x]]
            link(x, min(pool, key=lambda y: (y in in_y2, len(radj[y]), y)))
    for y in Y2:
        while len(radj[y]) < target:
            pool = [x for x in range(n) if y not in adj[x]]
            link(min(pool, key=lambda x: (x not in in_x2, len(adj[x]), x)), y)
    px, py = list(range(n)), list(range(n))
    if shuffle:
        rng.shuffle(px)
        rng.shuffle(py)
    rows = [0] * n
    for x in range(n):
        rows[px[x]] = mask_of(py[y] for y in adj[x])
    G = HostGraph(n, n, rows)
    assert G.min_degree >= target, "degree repair fell short"
    return G, sorted(px[x] for x in A), sorted(py[y] for y in B)
