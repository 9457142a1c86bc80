"""Exact H-tiling oracle: search, matching and validation."""

from .api import SolveBudget, SolveResult, has_h_factor, max_h_tiling, solve_factor
from .kernel import BACKENDS, DEFAULT_BACKEND
from .matching import max_matching
from .problem import build_problem, embedding_catalog, twin_classes
from .validate import ValidationReport, validate_tiling

__all__ = [
    "BACKENDS", "DEFAULT_BACKEND", "SolveBudget", "SolveResult", "ValidationReport",
    "build_problem", "embedding_catalog", "has_h_factor", "max_h_tiling", "max_matching",
    "solve_factor", "twin_classes", "validate_tiling",
]
