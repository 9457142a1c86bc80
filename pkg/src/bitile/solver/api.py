"""Exact maximum H-tiling and H-factor decision on small hosts."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..arithmetic import compute_sigma
from ..errors import BudgetExceeded, DivisibilityViolation
from ..graph import HostGraph, TileGraph
from ..tiling import TilingAssignment
from . import kernel
from ._search_py import BUDGET
from .problem import Problem, build_problem, realise


def default_time_limit() -> float:
    raw = os.environ.get("BITILE_BUDGET_SECS")
    return float(raw) if raw else 60.0


@dataclass(frozen=True)
class SolveBudget:
    node_limit: int = 10_000_000
    time_limit: float = field(default_factory=default_time_limit)
    workers: int = 1

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit <= 0 or self.workers <= 0:
            raise ValueError("budget limits must be positive")


@dataclass
class SolveResult:
    assignment: TilingAssignment | None
    copies: int
    optimal: bool
    nodes: int
    backend: str
    decision: bool | None = None

    def to_json(self) -> dict:
        out = {"decision": self.decision, "copies": self.copies,
               "nodes": self.nodes, "optimal": self.optimal}
        if self.assignment is not None:
            out["tiling"] = self.assignment.to_json()
        return out


def _arrays(problem: Problem):
    pl_type = [p.type_index for p in problem.placements]
    pl_cls = [[c for c, _ in p.counts] for p in problem.placements]
    pl_cnt = [[k for _, k in p.counts] for p in problem.placements]
    return pl_type, pl_cls, pl_cnt


def _side_bounds(problem: Problem):
    """Side-count data for the factor-mode bounds of the search kernels.

    Per placement its X vertices; per type the least and most X vertices
    and the largest ``|X| - |Y|`` of a placement; per class its neighbours.
    """
    classes = problem.classes
    is_x = [s == "X" for s in classes.side]
    pl_x = [sum(k for c, k in p.counts if is_x[c]) for p in problem.placements]
    lo = [size for size in problem.type_size]
    hi = [0] * len(problem.type_size)
    dev = [0] * len(problem.type_size)
    for p, x in zip(problem.placements, pl_x):
        t = p.type_index
        lo[t] = min(lo[t], x)
        hi[t] = max(hi[t], x)
        dev[t] = max(dev[t], abs(2 * x - problem.type_size[t]))
    x_total = sum(n for n, x in zip(problem.class_sizes, is_x) if x)
    nbrs = [[b for b, adj in enumerate(row) if adj] for row in classes.adjacent]
    return pl_x, lo, hi, x_total, nbrs, is_x, dev


def _worker(args):
    backend, payload, split_mod, split_idx, sides = args
    return kernel.get_search(backend)(*payload, split_mod=split_mod, split_idx=split_idx, sides=sides)


def _run(problem: Problem, caps: list[int], factor_mode: bool, budget: SolveBudget, backend: str):
    pl_type, pl_cls, pl_cnt = _arrays(problem)
    payload = (problem.class_sizes, pl_type, pl_cls, pl_cnt, problem.type_size,
               problem.mult, caps, factor_mode, budget.node_limit, budget.time_limit)
    sides = _side_bounds(problem) if factor_mode else None
    if budget.workers == 1:
        return kernel.get_search(backend)(*payload, sides=sides)
    jobs = [(backend, payload, budget.workers, i, sides) for i in range(budget.workers)]
    with ProcessPoolExecutor(max_workers=budget.workers) as pool:
        outcomes = list(pool.map(_worker, jobs))
    nodes = sum(o[3] for o in outcomes)
    status = max(o[0] for o in outcomes)
    if factor_mode:
        for st, value, seq, _ in outcomes:
            if value:
                return 0, 1, seq, nodes
        return status, 0, [], nodes
    best = max(outcomes, key=lambda o: o[1])
    return status, best[1], best[2], nodes


def max_h_tiling(G: HostGraph, H: TileGraph, budget: SolveBudget | None = None,
                 backend: str | None = None, strict: bool = False) -> SolveResult:
    """Largest set of vertex-disjoint copies of ``H`` in ``G``.

    With ``strict`` an exhausted budget raises :class:`BudgetExceeded`
    carrying the incumbent; otherwise the result has ``optimal=False``.
    """
    budget = budget or SolveBudget()
    backend = backend or kernel.DEFAULT_BACKEND
    problem = build_problem(G, H)
    caps = [problem.max_copies * m for m in problem.mult]
    status, value, seq, nodes = _run(problem, caps, False, budget, backend)
    assignment = realise(G, H, problem, seq, value)
    result = SolveResult(assignment, value, status != BUDGET, nodes, backend)
    if strict and status == BUDGET:
        raise BudgetExceeded(f"search stopped after {nodes} nodes", incumbent=result, nodes=nodes)
    return result


def solve_factor(G: HostGraph, H: TileGraph, budget: SolveBudget | None = None,
                 backend: str | None = None) -> SolveResult:
    """Decide whether ``G`` has an H-factor; the result carries one if so."""
    budget = budget or SolveBudget()
    backend = backend or kernel.DEFAULT_BACKEND
    total = G.nx + G.ny
    if total % H.h:
        raise DivisibilityViolation(f"h = {H.h} must divide |X|+|Y| = {total}")
    m = total // H.h
    u = compute_sigma(H)
    if not m * u <= G.nx <= m * (H.h - u):
        # every copy puts between u and w of its vertices in X
        return SolveResult(None, 0, True, 0, backend, decision=False)
    problem = build_problem(G, H)
    caps = [m * k for k in problem.mult]
    status, value, seq, nodes = _run(problem, caps, True, budget, backend)
    if status == BUDGET:
        raise BudgetExceeded(f"undecided after {nodes} nodes", incumbent=None, nodes=nodes)
    if not value:
        return SolveResult(None, 0, True, nodes, backend, decision=False)
    return SolveResult(realise(G, H, problem, seq, m), m, True, nodes, backend, decision=True)


def has_h_factor(G: HostGraph, H: TileGraph, budget: SolveBudget | None = None,
                 backend: str | None = None) -> bool:
    return bool(solve_factor(G, H, budget, backend).decision)
