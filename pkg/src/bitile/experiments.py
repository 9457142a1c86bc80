"""Threshold scans, tightness checks and the regime table.

A scan locates, for each ``n``, the smallest minimum degree at which every
host of a tested family has an H-factor.  The family is built from nested
chains: each chain starts from a sparse host (the no-factor witness when one
exists) and is lifted one degree at a time by adding random edges, so later
members contain earlier ones.  Having a factor is monotone along a chain,
which makes a binary search per chain sound.

The reported threshold is relative to this family only.  It is a lower bound
on the true threshold, never a proof of it.
"""

from __future__ import annotations

import csv
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .arithmetic import compute_hcf_family, compute_parameters, threshold
from .constructions import extremal_construction, verify_no_factor
from .errors import BudgetExceeded, DivisibilityViolation
from .graph import HostGraph, TileGraph
from .solver import SolveBudget, solve_factor

CSV_COLUMNS = ("n", "m", "empirical", "inconclusive", "predicted_critical", "predicted_upper",
               "gap_critical", "gap_upper", "witness_case", "witness_delta", "chains", "seed", "nodes")
FAMILY_NOTE = ("empirical thresholds are relative to the tested host family "
               "(witness chain plus random completions); they are lower bounds, not proofs")


def lift(G: HostGraph, delta: int, rng: random.Random) -> HostGraph:
    """Add random edges until every vertex has degree at least ``delta``."""
    adj = list(G.adj_x)
    for x in range(G.nx):
        missing = delta - adj[x].bit_count()
        if missing > 0:
            free = [y for y in range(G.ny) if not adj[x] >> y & 1]
            for y in rng.sample(free, missing):
                adj[x] |= 1 << y
    for y in range(G.ny):
        missing = delta - sum(row >> y & 1 for row in adj)
        if missing > 0:
            free = [x for x in range(G.nx) if not adj[x] >> y & 1]
            for x in rng.sample(free, missing):
                adj[x] |= 1 << y
    return HostGraph(G.nx, G.ny, adj)


def thin(G: HostGraph, rate: float, rng: random.Random) -> HostGraph:
    """Delete each edge independently with probability ``rate``."""
    return G.without_edges([e for e in G.edges() if rng.random() < rate])


def build_chain(start: HostGraph, rng: random.Random) -> list[HostGraph]:
    """``chain[d]`` has minimum degree at least ``d`` and contains ``chain[d-1]``."""
    chain = [start]
    for d in range(1, start.nx + 1):
        chain.append(lift(chain[-1], d, rng))
    return chain


@dataclass(frozen=True)
class ScanRow:
    n: int
    m: int
    empirical: int | None
    inconclusive: bool
    predicted_critical: Fraction | None
    predicted_upper: Fraction
    witness_case: str | None
    witness_delta: int | None
    chains: int
    seed: str
    nodes: int
    frontier: HostGraph | None = field(default=None, compare=False)

    @property
    def gap_critical(self) -> Fraction | None:
        if self.empirical is None or self.predicted_critical is None:
            return None
        return self.predicted_critical - self.empirical

    @property
    def gap_upper(self) -> Fraction | None:
        if self.empirical is None:
            return None
        return self.predicted_upper - self.empirical

    def flat(self) -> dict:
        def num(x):
            if x is None:
                return None
            return x.numerator if x.denominator == 1 else str(x)

        return {
            "n": self.n, "m": self.m, "empirical": self.empirical,
            "inconclusive": self.inconclusive,
            "predicted_critical": num(self.predicted_critical),
            "predicted_upper": num(self.predicted_upper),
            "gap_critical": num(self.gap_critical), "gap_upper": num(self.gap_upper),
            "witness_case": self.witness_case, "witness_delta": self.witness_delta,
            "chains": self.chains, "seed": self.seed, "nodes": self.nodes,
        }

    def to_json(self) -> dict:
        out = self.flat()
        out["frontier"] = None if self.frontier is None else self.frontier.to_json()
        return out


@dataclass(frozen=True)
class ScanReport:
    pattern: dict
    n_grid: tuple[int, ...]
    rows: tuple[ScanRow, ...]
    family: dict
    seed: int
    note: str = FAMILY_NOTE

    def to_json(self) -> dict:
        return {"pattern": self.pattern, "n_grid": list(self.n_grid), "seed": self.seed,
                "family": self.family, "note": self.note,
                "rows": [r.to_json() for r in self.rows]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in self.rows:
            writer.writerow(r.flat())
        return buf.getvalue()


def _factor(G: HostGraph, H: TileGraph, budget: SolveBudget, tally: list[int]) -> bool:
    result = solve_factor(G, H, budget)
    tally[0] += result.nodes
    return bool(result.decision)


def _frontier(chain: list[HostGraph], H: TileGraph, budget: SolveBudget, tally: list[int]) -> int:
    """Smallest ``d`` whose chain member has an H-factor (``len(chain)`` if none)."""
    lo, hi = 0, len(chain)
    while lo < hi:
        mid = (lo + hi) // 2
        if _factor(chain[mid], H, budget, tally):
            hi = mid
        else:
            lo = mid + 1
    return lo


def scan_row(H: TileGraph, n: int, chains: int = 3, budget: SolveBudget | None = None,
             seed: int = 0, thin_rate: float = 0.3) -> ScanRow:
    budget = budget or SolveBudget()
    if n < 1 or (2 * n) % H.h:
        raise DivisibilityViolation(f"h = {H.h} must divide 2n = {2 * n}")
    m = 2 * n // H.h
    tag = f"{seed}:{n}"
    th = threshold(H, n)
    critical = th.value if compute_hcf_family(H).indicator else None
    upper = Fraction(n, 2) + Fraction(3 * H.h, 2) - 2
    try:
        witness = extremal_construction(H, m)
    except DivisibilityViolation:
        witness = None
    starts = []
    if witness is not None:
        starts.append(witness.host)
    base = witness.host if witness is not None else HostGraph.empty(n, n)
    for i in range(chains):
        starts.append(thin(base, thin_rate, random.Random(f"{tag}:thin:{i}")))
    case = witness.case if witness else None
    claimed = witness.claimed_delta if witness else None
    tally = [0]
    best, frontier = 0, None
    try:
        for i, start in enumerate(starts):
            chain = build_chain(start, random.Random(f"{tag}:lift:{i}"))
            d = _frontier(chain, H, budget, tally)
            if d > best:
                best, frontier = d, chain[d - 1]
    except BudgetExceeded as err:
        tally[0] += err.nodes
        return ScanRow(n, m, None, True, critical, upper,
                       case, claimed,
                       len(starts), tag, tally[0])
    return ScanRow(n, m, best, False, critical, upper,
                   case, claimed,
                   len(starts), tag, tally[0], frontier)


def _row_job(args):
    return scan_row(*args)


def scan_threshold(H: TileGraph, n_grid, chains: int = 3, budget: SolveBudget | None = None,
                   seed: int = 0, workers: int = 1, thin_rate: float = 0.3) -> ScanReport:
    """Empirical minimum-degree threshold for each ``n``; rows may run in parallel."""
    budget = budget or SolveBudget()
    n_grid = tuple(n_grid)
    for n in n_grid:
        if n < 1 or (2 * n) % H.h:
            raise DivisibilityViolation(f"h = {H.h} must divide 2n = {2 * n}")
    jobs = [(H, n, chains, budget, seed, thin_rate) for n in n_grid]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_job, jobs))
    else:
        rows = [_row_job(j) for j in jobs]
    family = {"witness_chain": True, "random_chains": chains, "thin_rate": thin_rate,
              "lift": "random edges to each deficient vertex, nested"}
    return ScanReport(_summary(H), n_grid, tuple(rows), family, seed)


def _summary(H: TileGraph) -> dict:
    p = compute_parameters(H).to_json()
    keep = ("h", "u", "w", "chi_cr", "hcf_c", "hcf_chi", "hcf_indicator", "c1_ceil")
    return {"name": H.name, "vertices": H.h, "edges": [list(e) for e in H.edges],
            **{k: p[k] for k in keep}}


@dataclass(frozen=True)
class TightnessRow:
    m: int
    n: int
    case: str
    claimed_delta: int
    built_delta: int
    has_factor: bool | None
    nodes: int

    @property
    def ok(self) -> bool:
        return self.built_delta == self.claimed_delta and self.has_factor is False

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "case": self.case, "claimed_delta": self.claimed_delta,
                "built_delta": self.built_delta, "has_factor": self.has_factor,
                "nodes": self.nodes, "ok": self.ok}


def verify_tightness(H: TileGraph, max_vertices: int = 28,
                     budget: SolveBudget | None = None) -> list[TightnessRow]:
    """Build every witness with ``2n <= max_vertices`` and certify it has no factor."""
    rows = []
    m = 1
    while m * H.h <= max_vertices:
        try:
            witness = extremal_construction(H, m)
        except DivisibilityViolation:
            m += 1
            continue
        report = verify_no_factor(witness, H, budget, max_vertices=max_vertices)
        rows.append(TightnessRow(m, witness.n, witness.case, witness.claimed_delta,
                                 witness.host.min_degree, report.has_factor, report.nodes))
        m += 1
    return rows


def regime_table(patterns: dict[str, TileGraph]) -> list[dict]:
    """Leading threshold coefficient per pattern: ``1 - 1/chi_cr`` or ``1/2``."""
    out = []
    for name, H in sorted(patterns.items()):
        p = compute_parameters(H)
        coeff = 1 - 1 / p.chi_cr if p.indicator and p.chi_cr else Fraction(1, 2)
        out.append({"pattern": name, "u": p.u, "w": p.w, "chi_cr": str(p.chi_cr),
                    "hcf_indicator": p.indicator, "leading_coefficient": str(coeff),
                    "regime": "critical-chromatic" if p.indicator else "half"})
    return out
