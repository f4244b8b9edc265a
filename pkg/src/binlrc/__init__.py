"""Binary locally repairable codes through the lattice of cyclic flats."""

from .bounds import (
    BoundDomainError,
    bound_alpha,
    bound_best_corollary,
    bound_cm_delta,
    bound_ell_singleton,
    bound_kamath,
    bound_ldelta,
    bound_noalpha,
    compare_cm_vs_new,
    evaluate_bounds,
    kopt_plotkin,
    sweep,
)
from .gf2 import BitMatrix, MatrixFormatError, format_matrix, min_distance, parse_matrix, validate_storage_code
from .locality import (
    build_rps_chain,
    check_chain_lemmas,
    discover_delta2_locality,
    discover_repair_sets,
    parse_repair_sets,
    plan_repair,
    simulate_repair,
    verify_locality,
)
from .matroid import BinaryMatroid, Matroid, uniform_matroid
from .zlattice import CyclicFlatLattice, classify_edges, distance_via_flats, enumerate_cyclic_flats, to_dot

__version__ = "0.1.0"

__all__ = [
    "BinaryMatroid", "BitMatrix", "BoundDomainError", "CyclicFlatLattice", "Matroid", "MatrixFormatError",
    "bound_alpha", "bound_best_corollary", "bound_cm_delta", "bound_ell_singleton", "bound_kamath",
    "bound_ldelta", "bound_noalpha", "build_rps_chain", "check_chain_lemmas", "classify_edges",
    "compare_cm_vs_new", "discover_delta2_locality", "discover_repair_sets", "distance_via_flats",
    "enumerate_cyclic_flats", "evaluate_bounds", "format_matrix", "kopt_plotkin", "min_distance",
    "parse_matrix", "parse_repair_sets", "plan_repair", "simulate_repair", "sweep", "to_dot",
    "uniform_matroid", "validate_storage_code", "verify_locality",
]
