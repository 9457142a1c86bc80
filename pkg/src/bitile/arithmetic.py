"""Numeric invariants of a bipartite pattern.

Everything here is a pure function of a :class:`~bitile.graph.TileGraph`.
Exact arithmetic is used throughout (``int`` and ``fractions.Fraction``);
``math.inf`` stands for an infinite highest common factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .errors import DivisibilityViolation, EdgelessPattern, HcfNotOne, InvalidGraph
from .graph import TileGraph

INF = math.inf


def reachable_imbalances(d: Sequence[int]) -> set[int]:
    """All values of ``sum(e_i * d_i)`` over sign vectors ``e`` in ``{-1, 1}^k``.

    Dynamic programming over a shifted bitset: bit ``s + total`` is set when
    the signed sum ``s`` is reachable.
    """
    total = sum(d)
    reach = 1 << total  # the empty sum 0, shifted by ``total``
    for di in d:
        reach = (reach << di) | (reach >> di)
    return {i - total for i in range(2 * total + 1) if reach >> i & 1}


def compute_sigma(H: TileGraph) -> int:
    """Smallest color class over all proper 2-colorings of ``H``."""
    widest = max(abs(s) for s in reachable_imbalances(H.d))
    return (H.h - widest) // 2


def compute_chi_cr(H: TileGraph) -> Fraction:
    if not H.has_edges:
        raise EdgelessPattern("chi_cr is undefined for an edgeless pattern")
    return Fraction(H.h, H.h - compute_sigma(H))


def _gcd_nonzero(values) -> int | float:
    nz = [abs(v) for v in values if v]
    return reduce(math.gcd, nz) if nz else INF


@dataclass(frozen=True)
class HcfFamily:
    hcf_c: int
    D: frozenset[int]
    hcf_chi: int | float
    hcf_chi_c: int | float
    indicator: bool

    @property
    def no_imbalance(self) -> bool:
        return self.hcf_chi_c == INF


def hcf_family_of_profile(c: Sequence[int], d: Sequence[int]) -> HcfFamily:
    """The hcf family from component orders ``c`` and imbalances ``d`` alone."""
    hcf_c = reduce(math.gcd, c)
    D = frozenset(abs(s) for s in reachable_imbalances(d))
    hcf_chi = _gcd_nonzero(D)
    hcf_chi_c = _gcd_nonzero(d)
    indicator = hcf_c == 1 and hcf_chi <= 2
    return HcfFamily(hcf_c, D, hcf_chi, hcf_chi_c, indicator)


def compute_hcf_family(H: TileGraph) -> HcfFamily:
    return hcf_family_of_profile(H.c, H.d)


def _lex_first_within(a: Sequence[int], target: int, radius: int) -> tuple[int, ...] | None:
    """Lexicographically smallest ``b`` with ``max|b_i| <= radius`` and ``b.a == target``."""
    k = len(a)
    suffix_gcd = [0] * (k + 1)
    suffix_sum = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix_gcd[i] = math.gcd(a[i], suffix_gcd[i + 1])
        suffix_sum[i] = a[i] + suffix_sum[i + 1]
    chosen = [0] * k

    def place(i: int, rest: int) -> bool:
        if i == k - 1:
            q, rem = divmod(rest, a[i])
            if rem == 0 and -radius <= q <= radius:
                chosen[i] = q
                return True
            return False
        for b in range(-radius, radius + 1):
            nxt = rest - b * a[i]
            if nxt % suffix_gcd[i + 1] or abs(nxt) > radius * suffix_sum[i + 1]:
                continue
            chosen[i] = b
            if place(i + 1, nxt):
                return True
        return False

    return tuple(chosen) if place(0, target) else None


def bezout_bounded(a: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Return ``(gcd(a), b)`` with ``sum(b_i a_i) == gcd`` and ``max|b_i| <= max(a)``.

    Searches radius by radius, so the returned vector minimises ``max|b_i|``;
    ties go to the lexicographically smallest vector.
    """
    a = [int(x) for x in a]
    if not a or any(x < 1 for x in a):
        raise InvalidGraph("bezout_bounded needs a nonempty sequence of positive integers")
    g = reduce(math.gcd, a)
    for radius in range(1, max(a) + 1):
        b = _lex_first_within(a, g, radius)
        if b is not None:
            return g, b
    raise AssertionError(f"no bounded Bezout vector for {a}")  # excluded by the existence proof


def zeta_coefficients(H: TileGraph) -> tuple[int, ...]:
    fam = compute_hcf_family(H)
    if fam.hcf_c != 1:
        raise HcfNotOne(f"hcf_c(H) = {fam.hcf_c}, zeta needs hcf_c(H) = 1")
    return bezout_bounded(H.c)[1]


def beta_coefficients(H: TileGraph) -> tuple[int, ...]:
    """Coefficients with ``sum(beta_i d_i) == 1``; balanced components get 0."""
    idx = [i for i, di in enumerate(H.d) if di > 0]
    if not idx:
        raise HcfNotOne("NoImbalance: every component is balanced, beta is undefined")
    g, sub = bezout_bounded([H.d[i] for i in idx])
    if g != 1:
        raise HcfNotOne(f"hcf_chi_c(H) = {g}, beta needs hcf_chi_c(H) = 1")
    beta = [0] * H.k_c
    for i, b in zip(idx, sub):
        beta[i] = b
    return tuple(beta)


@dataclass(frozen=True)
class ZetaBeta:
    zeta: tuple[int, ...]
    beta: tuple[int, ...]

    @property
    def zeta_max(self) -> int:
        return max(abs(z) for z in self.zeta)

    @property
    def beta_max(self) -> int:
        return max(abs(b) for b in self.beta)


def zeta_beta(H: TileGraph) -> ZetaBeta:
    return ZetaBeta(zeta_coefficients(H), beta_coefficients(H))


@dataclass(frozen=True)
class Constants:
    c1: Fraction
    c1_ceil: int
    c2_bound: int
    c2_extremal: int
    c2_nonextremal: Fraction | None


def c2_bounds(H: TileGraph) -> tuple[int, int, Fraction | None]:
    h = H.h
    u = compute_sigma(H)
    w = h - u
    nonext = Fraction(4 * w, u) * (h + w - u - 2) if u > 0 else None
    return 8 * h * h, 4 * h * h, nonext


def constants(H: TileGraph) -> Constants:
    fam = compute_hcf_family(H)
    if not fam.indicator:
        raise HcfNotOne(
            f"c1 needs hcf(H) = 1 (hcf_c = {fam.hcf_c}, hcf_chi = {fam.hcf_chi})"
        )
    zb = zeta_beta(H)
    h = H.h
    u = compute_sigma(H)
    w = h - u
    c1 = (zb.zeta_max * h * h + zb.beta_max * (w - u) ** 2
          + (Fraction(h, 2) + 1) * (w - u) + w)
    bound, ext, nonext = c2_bounds(H)
    return Constants(c1, math.ceil(c1), bound, ext, nonext)


@dataclass(frozen=True)
class Threshold:
    value: Fraction
    regime: str  # CriticalChromatic | ZhaoExact | ChromaticUpper
    lower_bound: Fraction

    @property
    def degree(self) -> int:
        """Smallest integer minimum degree meeting ``value``."""
        return math.ceil(self.value)


def threshold(H: TileGraph, n: int) -> Threshold:
    """Minimum-degree threshold for an H-factor in a balanced host with ``n`` per side.

    ``lower_bound`` is the minimum degree of the matching no-factor witness.
    """
    if n < 1 or (2 * n) % H.h:
        raise DivisibilityViolation(f"h = {H.h} must divide 2n = {2 * n}")
    fam = compute_hcf_family(H)
    u = compute_sigma(H)
    w = H.h - u
    zhao = Fraction(n, 2) + Fraction(3 * H.h, 2) - 2
    if fam.indicator:
        c = constants(H)
        return Threshold(Fraction(u * n, H.h) + c.c1_ceil, "CriticalChromatic",
                         Fraction(u * n, H.h) - 1)
    lower = Fraction(math.ceil(n / 2) - 1)
    return Threshold(zhao, "ZhaoExact" if u == w else "ChromaticUpper", lower)


@dataclass(frozen=True)
class TilingParameters:
    h: int
    k_c: int
    c: tuple[int, ...]
    d: tuple[int, ...]
    u: int
    w: int
    chi_cr: Fraction | None
    hcf_c: int
    D: frozenset[int]
    hcf_chi: int | float
    hcf_chi_c: int | float
    indicator: bool
    zeta: tuple[int, ...] | None
    beta: tuple[int, ...] | None
    c1: Fraction | None
    c1_ceil: int | None
    c2_bound: int
    c2_extremal: int
    c2_nonextremal: Fraction | None

    @property
    def zeta_max(self) -> int | None:
        return None if self.zeta is None else max(abs(z) for z in self.zeta)

    @property
    def beta_max(self) -> int | None:
        return None if self.beta is None else max(abs(b) for b in self.beta)

    @property
    def no_imbalance(self) -> bool:
        return self.hcf_chi_c == INF

    def to_json(self) -> dict:
        def num(x):
            if x is None:
                return None
            if x == INF:
                return "inf"
            if isinstance(x, Fraction):
                return str(x) if x.denominator != 1 else x.numerator
            return x

        return {
            "h": self.h, "k_c": self.k_c, "c": list(self.c), "d": list(self.d),
            "u": self.u, "w": self.w, "sigma": self.u,
            "chi_cr": num(self.chi_cr),
            "hcf_c": self.hcf_c, "D": sorted(self.D),
            "hcf_chi": num(self.hcf_chi), "hcf_chi_c": num(self.hcf_chi_c),
            "no_imbalance": self.no_imbalance,
            "hcf_indicator": self.indicator,
            "zeta": None if self.zeta is None else list(self.zeta), "zeta_max": self.zeta_max,
            "beta": None if self.beta is None else list(self.beta), "beta_max": self.beta_max,
            "c1": num(self.c1), "c1_ceil": self.c1_ceil,
            "c2_bound": self.c2_bound, "c2_extremal": self.c2_extremal,
            "c2_nonextremal": num(self.c2_nonextremal),
        }


def compute_parameters(H: TileGraph) -> TilingParameters:
    fam = compute_hcf_family(H)
    u = compute_sigma(H)
    try:
        zeta = zeta_coefficients(H)
    except HcfNotOne:
        zeta = None
    try:
        beta = beta_coefficients(H)
    except HcfNotOne:
        beta = None
    c1 = c1_ceil = None
    if fam.indicator:
        k = constants(H)
        c1, c1_ceil = k.c1, k.c1_ceil
    bound, ext, nonext = c2_bounds(H)
    return TilingParameters(
        h=H.h, k_c=H.k_c, c=H.c, d=H.d, u=u, w=H.h - u,
        chi_cr=compute_chi_cr(H) if H.has_edges else None,
        hcf_c=fam.hcf_c, D=fam.D, hcf_chi=fam.hcf_chi, hcf_chi_c=fam.hcf_chi_c,
        indicator=fam.indicator, zeta=zeta, beta=beta, c1=c1, c1_ceil=c1_ceil,
        c2_bound=bound, c2_extremal=ext, c2_nonextremal=nonext,
    )
