"""Bipartite graph tiling toolkit."""

from .arithmetic import (bezout_bounded, compute_chi_cr, compute_hcf_family, compute_parameters,
                         compute_sigma, constants, threshold, zeta_beta)
from .complete import factor_complete, feasible_corollary, kuw_almost_tiling, kuw_deficit_tiling
from .constructions import extremal_construction, verify_no_factor
from .embedding import dense_embed, find_disjoint_stars
from .errors import BitileError
from .experiments import scan_threshold
from .extremal import DenseEmbedConfig, classify_extremal, tile_extremal
from .graph import HostGraph, TileGraph, build_host, build_tile_graph, density
from .regularity import (check_regular_exact, check_regular_sampled, check_super_regular,
                         embed_in_regular_pair)
from .solver import SolveBudget, has_h_factor, max_h_tiling, max_matching, solve_factor, validate_tiling
from .tiling import TilingAssignment

__version__ = "0.1.0"

__all__ = [
    "BitileError", "DenseEmbedConfig", "HostGraph", "SolveBudget", "TileGraph", "TilingAssignment",
    "bezout_bounded", "build_host", "build_tile_graph", "check_regular_exact",
    "check_regular_sampled", "check_super_regular", "classify_extremal", "compute_chi_cr",
    "compute_hcf_family", "compute_parameters", "compute_sigma", "constants", "density",
    "dense_embed", "embed_in_regular_pair", "extremal_construction", "factor_complete",
    "feasible_corollary", "find_disjoint_stars", "has_h_factor", "kuw_almost_tiling",
    "kuw_deficit_tiling", "max_h_tiling", "max_matching", "scan_threshold", "solve_factor",
    "threshold", "tile_extremal", "validate_tiling", "verify_no_factor", "zeta_beta",
]
