"""Lower-bound hosts: dense balanced graphs with no H-factor.

Each witness is the disjoint union of two complete bipartite blocks
``K_{a1,b1}`` (on ``X[:a1]``, ``Y[:b1]``) and ``K_{a2,b2}`` (on the rest).
Which block sizes are used depends on the hcf family of the pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arithmetic import compute_hcf_family, compute_sigma
from .errors import (BudgetExceeded, DivisibilityViolation, EdgelessPattern, InstanceTooLarge,
                     NoCaseApplies)
from .graph import HostGraph, TileGraph, build_tile_graph

CASES = ("HcfC3plus", "HcfC2", "HcfChi3", "HcfOne")


@dataclass(frozen=True)
class ExtremalWitness:
    host: HostGraph
    case: str
    claimed_delta: int
    note: str
    n: int
    m: int
    blocks: tuple[tuple[int, int], tuple[int, int]]
    analytic: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "case": self.case, "n": self.n, "m": self.m,
            "blocks": [list(b) for b in self.blocks],
            "claimed_delta": self.claimed_delta, "note": self.note,
            "analytic": self.analytic, "host": self.host.to_json(),
        }


def two_blocks(a1: int, b1: int, a2: int, b2: int) -> HostGraph:
    """``K_{a1,b1}`` on the first vertices of each side, ``K_{a2,b2}`` on the rest."""
    if a1 + a2 != b1 + b2:
        raise DivisibilityViolation(f"blocks ({a1},{b1}) + ({a2},{b2}) are not balanced overall")
    n = a1 + a2
    block1 = ((1 << b1) - 1)
    block2 = ((1 << (b1 + b2)) - 1) ^ block1
    return HostGraph(n, n, [block1] * a1 + [block2] * a2)


def host_sigma(G: HostGraph) -> int:
    """Smallest color class over proper 2-colorings of the host, treated as one graph."""
    edges = [(x, G.nx + y) for x, y in G.edges()]
    return compute_sigma(build_tile_graph(G.nx + G.ny, edges))


def classify_case(H: TileGraph) -> str:
    fam = compute_hcf_family(H)
    applies = {
        "HcfC3plus": fam.hcf_c >= 3,
        "HcfC2": fam.hcf_c == 2,
        "HcfChi3": fam.hcf_c == 1 and fam.hcf_chi >= 3,
        "HcfOne": fam.indicator,
    }
    hits = [case for case in CASES if applies[case]]
    if len(hits) != 1:
        raise NoCaseApplies(f"cases {hits or 'none'} apply (hcf_c = {fam.hcf_c}, hcf_chi = {fam.hcf_chi})")
    return hits[0]


def admissible_m(H: TileGraph, limit: int) -> list[int]:
    """Multiplicities ``m <= limit`` for which the construction is defined."""
    out = []
    for m in range(1, limit + 1):
        try:
            _blocks(H, m)
        except DivisibilityViolation:
            continue
        out.append(m)
    return out


def _blocks(H: TileGraph, m: int) -> tuple[str, int, tuple[int, int, int, int]]:
    if not H.has_edges:
        raise EdgelessPattern("constructions need a pattern with an edge")
    if m < 1 or (m * H.h) % 2:
        raise DivisibilityViolation(f"2n = m*h = {m * H.h} must be even and positive")
    n = m * H.h // 2
    case = classify_case(H)
    lo, hi = n // 2, (n + 1) // 2  # floor, ceil
    if case == "HcfC3plus":
        return case, n, (hi, lo + 1, lo, hi - 1)
    if case == "HcfC2":
        if n % 2:
            return case, n, (hi, lo, lo, hi)
        return case, n, (n // 2, n // 2 + 1, n // 2, n // 2 - 1)
    if case == "HcfChi3":
        return case, n, (lo + 1, hi - 1, hi - 1, lo + 1)
    u = compute_sigma(H)
    w = H.h - u
    if (n * u) % H.h or (n * w) % H.h:
        raise DivisibilityViolation(f"h = {H.h} must divide nu = {n * u} and nw = {n * w}")
    small, large = n * u // H.h - 1, n * w // H.h + 1
    if small < 0:
        raise DivisibilityViolation(f"nu/h - 1 = {small} is negative")
    return case, n, (small, large, large, small)


def _analytic(H: TileGraph, case: str, G: HostGraph, n: int, m: int,
              blocks: tuple[int, int, int, int]) -> tuple[str, dict]:
    a1, b1, a2, b2 = blocks
    fam = compute_hcf_family(H)
    if case == "HcfC3plus":
        orders = [a1 + b1, a2 + b2]
        return (f"block orders {orders} differ by 2 but every component order is a multiple of "
                f"hcf_c = {fam.hcf_c} >= 3", {"block_orders": orders, "hcf_c": fam.hcf_c})
    if case == "HcfC2":
        orders = [a1 + b1, a2 + b2]
        return (f"block orders {orders} are odd and every component order is even",
                {"block_orders": orders, "hcf_c": fam.hcf_c})
    if case == "HcfChi3":
        gaps = [abs(a1 - b1), abs(a2 - b2)]
        return (f"class-size gaps {gaps} inside the blocks can only move by multiples of "
                f"hcf_chi_c = {fam.hcf_chi_c} >= 3", {"class_gaps": gaps, "hcf_chi_c": fam.hcf_chi_c})
    u = compute_sigma(H)
    sigma_g = host_sigma(G)
    return (f"sigma(G) = {sigma_g} < mu = {m * u}, but an H-factor would force sigma(G) >= mu",
            {"sigma_G": sigma_g, "mu": m * u})


def extremal_construction(H: TileGraph, m: int) -> ExtremalWitness:
    """The no-factor witness on ``n = mh/2`` vertices per side."""
    case, n, blocks = _blocks(H, m)
    a1, b1, a2, b2 = blocks
    G = two_blocks(a1, b1, a2, b2)
    if case == "HcfOne":
        claimed = n * compute_sigma(H) // H.h - 1
    else:
        claimed = math.ceil(n / 2) - 1
    if G.min_degree != claimed:
        raise AssertionError(f"{case}: built delta {G.min_degree} != claimed {claimed}")
    note, analytic = _analytic(H, case, G, n, m, blocks)
    return ExtremalWitness(G, case, claimed, note, n, m, ((a1, b1), (a2, b2)), analytic)


@dataclass(frozen=True)
class NoFactorReport:
    has_factor: bool | None
    nodes: int
    note: str
    analytic: dict

    def to_json(self) -> dict:
        return {"has_factor": self.has_factor, "nodes": self.nodes,
                "note": self.note, "analytic": self.analytic}


def verify_no_factor(witness: ExtremalWitness, H: TileGraph, budget=None,
                     max_vertices: int = 40) -> NoFactorReport:
    """Run the exact solver on a witness; the analytic obstruction is reported alongside."""
    from .solver import SolveBudget, solve_factor

    G = witness.host
    if G.nx + G.ny > max_vertices:
        exc = InstanceTooLarge(f"2n = {G.nx + G.ny} > {max_vertices}; analytic report only: {witness.note}")
        exc.report = NoFactorReport(None, 0, witness.note, witness.analytic)
        raise exc
    try:
        result = solve_factor(G, H, budget or SolveBudget())
    except BudgetExceeded as err:
        exc = InstanceTooLarge(f"solver budget exhausted after {err.nodes} nodes; analytic report only: "
                               f"{witness.note}")
        exc.report = NoFactorReport(None, err.nodes, witness.note, witness.analytic)
        raise exc from err
    return NoFactorReport(bool(result.decision), result.nodes, witness.note, witness.analytic)
